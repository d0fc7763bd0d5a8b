#include "jiosm/presets.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace jiosm {

namespace {

// Shared algorithm blocks. Paper-scale sets use the published tuning; the
// desk sets are retuned for m = 16 (see README).
const char* kSgPaper = R"(
[algorithm:FR-SG]
mu_w = 0.05

[algorithm:FR-SM-SG]
alpha = 22
beta = 0.99

[algorithm:JIO-SG]
rank = 5
mu_T = 0.05
mu_w = 0.05

[algorithm:JIO-SM-SG]
rank = 5
alpha = 22
beta = 0.99
)";

const char* kRlsPaper = R"(
[algorithm:FR-RLS]

[algorithm:FR-SM-RLS]
alpha = 26
beta = 0.992

[algorithm:JIO-RLS]
rank = 5

[algorithm:JIO-SM-RLS]
rank = 5
alpha = 26
beta = 0.992
)";

const char* kSgDesk = R"(
[algorithm:FR-SG]
mu_w = 0.05

[algorithm:FR-SM-SG]
alpha = 165
beta = 0.998

[algorithm:JIO-SG]
rank = 5
mu_T = 0.05
mu_w = 0.05
init = subarray

[algorithm:JIO-SM-SG]
rank = 5
alpha = 165
beta = 0.998
init = subarray
)";

const char* kRlsDesk = R"(
[algorithm:FR-RLS]
rho = 30

[algorithm:FR-SM-RLS]
alpha = 145
beta = 0.998
rho = 30

[algorithm:JIO-RLS]
rank = 5
rho = 30
init = subarray

[algorithm:JIO-SM-RLS]
rank = 5
alpha = 145
beta = 0.998
rho = 30
init = subarray
)";

// Desk single-algorithm blocks.
const char* kJioSmSgDesk = "\n[algorithm:JIO-SM-SG]\nrank = 5\nalpha = 165\nbeta = 0.998\ninit = subarray\n";
const char* kJioSmRlsDesk =
    "\n[algorithm:JIO-SM-RLS]\nrank = 5\nalpha = 145\nbeta = 0.998\nrho = 30\ninit = subarray\n";

const char* kPaperScene = R"(
[array]
elements = 64
spacing = 0.5

[scenario]
snr_db = 10
sir_db = -20
soi_doa = 90
interferers = 24
random_doas = true
min_separation = 0.5
)";

const char* kDeskScene = R"(
[array]
elements = 16
spacing = 0.5

[scenario]
snr_db = 10
sir_db = -20
soi_doa = 90
interferers = 4
random_doas = true
min_separation = 0.5
)";

std::string experiment(const char* name, int snapshots, int runs) {
    return std::string("[experiment]\nname = ") + name + "\nsnapshots = " + std::to_string(snapshots) +
           "\nruns = " + std::to_string(runs) + "\nseed = 1\n";
}

std::map<std::string, std::string, std::less<>> build() {
    std::map<std::string, std::string, std::less<>> p;

    p["fig2"] = experiment("fig2", 300, 1000) + kPaperScene +
                "\n[algorithm:JIO-SM-SG]\nrank = 5\nalpha = 22\nbeta = 0.99\n"
                "\n[algorithm:JIO-SM-RLS]\nrank = 5\nalpha = 26\nbeta = 0.992\n"
                "\n[sweep]\nranks = 1,2,3,4,5,6,7,8,9,10\n";
    p["fig2_desk"] = experiment("fig2_desk", 300, 200) + kDeskScene + kJioSmSgDesk + kJioSmRlsDesk +
                     "\n[sweep]\nranks = 1,2,3,4,5,6,7,8,9,10\n";

    p["fig3"] = experiment("fig3", 1000, 1000) + kPaperScene + kSgPaper + kRlsPaper;
    p["fig3_desk"] = experiment("fig3_desk", 1000, 200) + kDeskScene + kSgDesk + kRlsDesk;

    p["fig4"] = experiment("fig4", 1000, 1000) + kPaperScene +
                "\n[algorithm:JIO-SM-SG]\nrank = 5\nalpha = 22\nbeta = 0.99\n"
                "\n[algorithm:JIO-SM-SG-fixed-1.0]\ntype = JIO-SM-SG\nrank = 5\nbound = fixed\ndelta = 1.0\n"
                "\n[algorithm:JIO-SM-SG-fixed-1.4]\ntype = JIO-SM-SG\nrank = 5\nbound = fixed\ndelta = 1.4\n"
                "\n[algorithm:JIO-SM-SG-fixed-0.8]\ntype = JIO-SM-SG\nrank = 5\nbound = fixed\ndelta = 0.8\n"
                "\n[algorithm:JIO-SM-RLS]\nrank = 5\nalpha = 26\nbeta = 0.992\n"
                "\n[algorithm:JIO-SM-RLS-fixed-1.0]\ntype = JIO-SM-RLS\nrank = 5\nbound = fixed\ndelta = 1.0\n";
    p["fig4_desk"] =
        experiment("fig4_desk", 1000, 200) + kDeskScene + kJioSmSgDesk +
        "\n[algorithm:JIO-SM-SG-fixed-1.0]\ntype = JIO-SM-SG\nrank = 5\nbound = fixed\ndelta = 1.0\ninit = subarray\n"
        "\n[algorithm:JIO-SM-SG-fixed-1.4]\ntype = JIO-SM-SG\nrank = 5\nbound = fixed\ndelta = 1.4\ninit = subarray\n"
        "\n[algorithm:JIO-SM-SG-fixed-0.8]\ntype = JIO-SM-SG\nrank = 5\nbound = fixed\ndelta = 0.8\ninit = subarray\n" +
        kJioSmRlsDesk +
        "\n[algorithm:JIO-SM-RLS-fixed-1.0]\ntype = JIO-SM-RLS\nrank = 5\nbound = fixed\ndelta = 1.0\nrho = 30\n"
        "init = subarray\n";

    p["fig5"] = experiment("fig5", 3000, 1000) +
                "\n[array]\nelements = 64\nspacing = 0.5\n"
                "\n[scenario]\nsnr_db = 10\nsir_db = -20\nsoi_doa = 90\ninterferers = 19\nrandom_doas = true\n"
                "change_at = 1500\nchange_add_count = 10\n"
                "\n[algorithm:FR-SG]\nmu_w = 0.05\n"
                "\n[algorithm:JIO-SG]\nrank = 5\n"
                "\n[algorithm:JIO-SM-SG]\nrank = 5\nalpha = 18\nbeta = 0.99\n"
                "\n[algorithm:FR-RLS]\n"
                "\n[algorithm:JIO-RLS]\nrank = 5\n"
                "\n[algorithm:JIO-SM-RLS]\nrank = 5\nalpha = 19\nbeta = 0.995\n";
    p["fig5_desk"] = experiment("fig5_desk", 1000, 200) +
                     "\n[array]\nelements = 16\nspacing = 0.5\n"
                     "\n[scenario]\nsnr_db = 10\nsir_db = -20\nsoi_doa = 90\ninterferers = 4\nrandom_doas = true\n"
                     "change_at = 500\nchange_add_count = 10\n"
                     "\n[algorithm:FR-SG]\nmu_w = 0.05\n"
                     "\n[algorithm:JIO-SG]\nrank = 5\ninit = subarray\n" +
                     kJioSmSgDesk +
                     "\n[algorithm:FR-RLS]\nrho = 30\n"
                     "\n[algorithm:JIO-RLS]\nrank = 5\nrho = 30\ninit = subarray\n" +
                     kJioSmRlsDesk;

    p["fig6"] = experiment("fig6", 1000, 1000) +
                "\n[array]\nelements = 64\nspacing = 0.5\n"
                "\n[scenario]\nsnr_db = 10\ninr_db = 25\nsoi_doa = 90\ninterferers = 19\nrandom_doas = true\n"
                "\n[algorithm:JIO-SM-SG]\nrank = 5\nalpha = 9.7\nbeta = 0.99\n"
                "\n[predictor]\nalgorithm = JIO-SM-SG\np_min = 0.163\nensemble = 200\n";
    p["fig6_desk"] = experiment("fig6_desk", 1000, 200) +
                     "\n[array]\nelements = 16\nspacing = 0.5\n"
                     "\n[scenario]\nsnr_db = 10\ninr_db = 25\nsoi_doa = 90\ninterferer_doas = 35,62,118,150\n" +
                     kJioSmSgDesk +
                     "\n[predictor]\nalgorithm = JIO-SM-SG\np_min = 0.163\nensemble = 200\n";

    return p;
}

const std::map<std::string, std::string, std::less<>>& table() {
    static const auto t = build();
    return t;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, text] : table()) {
            v.push_back(k);
        }
        return v;
    }();
    return names;
}

bool is_preset(std::string_view name) { return table().find(name) != table().end(); }

const std::string& preset_text(std::string_view name) {
    auto it = table().find(name);
    if (it == table().end()) {
        throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
    }
    return it->second;
}

}  // namespace jiosm
