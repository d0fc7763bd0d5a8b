#include "jiosm/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace jiosm {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

}  // namespace

std::string sanitize_label(const std::string& label) {
    std::string out;
    for (char c : label) {
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
                        c == '_' || c == '.';
        out.push_back(ok ? c : '_');
    }
    return out.empty() ? "unnamed" : out;
}

void write_trajectory_csv(const TrajectoryRecord& rec, const std::filesystem::path& path) {
    std::ofstream out = open_for_write(path);
    out << kTrajectoryHeader << '\n';
    const std::size_t n = rec.sinr_db_mean.size();
    for (std::size_t i = 0; i < n; ++i) {
        out << (i + 1) << ',' << fmt(rec.sinr_db_mean[i]) << ',' << fmt(rec.mse_mean[i]) << ','
            << fmt(rec.update_rate_cum[i]) << '\n';
    }
    finish(out, path);
}

std::vector<std::filesystem::path> emit_csv(const ExperimentResult& result, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    std::vector<std::filesystem::path> written;
    for (const auto& rec : result.records) {
        const auto path = dir / (sanitize_label(rec.label) + ".csv");
        write_trajectory_csv(rec, path);
        written.push_back(path);
    }
    const auto bound_path = dir / "mvdr_bound.csv";
    std::ofstream out = open_for_write(bound_path);
    out << "snapshot,sinr_db\n";
    for (std::size_t i = 0; i < result.mvdr_sinr_db.size(); ++i) {
        out << (i + 1) << ',' << fmt(result.mvdr_sinr_db[i]) << '\n';
    }
    finish(out, bound_path);
    written.push_back(bound_path);
    return written;
}

std::vector<TrajectoryRow> read_trajectory_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != kTrajectoryHeader) {
        throw std::runtime_error(path.string() + ": missing or unexpected header");
    }
    std::vector<TrajectoryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        TrajectoryRow r{};
        std::istringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() != 4) {
            throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
        }
        r.snapshot = std::stol(cells[0]);
        r.sinr_db_mean = std::stod(cells[1]);
        r.mse_mean = std::stod(cells[2]);
        r.update_rate_cum = std::stod(cells[3]);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace jiosm
