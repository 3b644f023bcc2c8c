#include "rotorpair/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace rotorpair {

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string resolve_output_path(const std::string& path) {
    const char* dir = std::getenv("ROTORPAIR_OUTPUT_DIR");
    if (!dir || !*dir) return path;
    const std::filesystem::path base = std::filesystem::path(path).filename();
    return (std::filesystem::path(dir) / base).string();
}

namespace {

std::vector<double> state_values(const TrajectorySample& s, int n) {
    std::vector<double> v;
    v.push_back(s.state.t);
    if (n == 3) {
        const Vector3 a = unhat(s.state.A);
        const Vector3 b = unhat(s.state.B);
        v.insert(v.end(), {a.x, a.y, a.z, b.x, b.y, b.z});
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) v.push_back(s.state.A(i, j));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) v.push_back(s.state.B(i, j));
    }
    v.push_back(s.invariants.energy);
    if (s.invariants.alignment) v.push_back(*s.invariants.alignment);
    if (s.invariants.k_reduced) v.push_back(*s.invariants.k_reduced);
    return v;
}

std::vector<std::pair<std::string, std::string>> header_fields(const Trajectory& traj) {
    std::vector<std::pair<std::string, std::string>> h;
    h.emplace_back("n", std::to_string(traj.params.n));
    h.emplace_back("eps", fmt_g17(traj.params.eps));
    std::string op, om;
    for (double v : traj.params.omega_plus.data()) op += fmt_g17(v) + " ";
    for (double v : traj.params.omega_minus.data()) om += fmt_g17(v) + " ";
    h.emplace_back("omega_plus", op);
    h.emplace_back("omega_minus", om);
    h.emplace_back("h", fmt_g17(traj.h));
    h.emplace_back("sample_every", std::to_string(traj.sample_every));
    h.emplace_back("max_skew_correction", fmt_g17(traj.max_skew_correction));
    return h;
}

} // namespace

std::vector<std::string> trajectory_columns(const Trajectory& traj) {
    std::vector<std::string> cols{"t"};
    const int n = traj.params.n;
    if (n == 3) {
        cols.insert(cols.end(), {"a_i", "a_j", "a_k", "b_i", "b_j", "b_k"});
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                cols.push_back("A_" + std::to_string(i) + std::to_string(j));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                cols.push_back("B_" + std::to_string(i) + std::to_string(j));
    }
    cols.push_back("energy");
    if (!traj.samples.empty()) {
        if (traj.samples.front().invariants.alignment) cols.push_back("alignment");
        if (traj.samples.front().invariants.k_reduced) cols.push_back("k_reduced");
    }
    return cols;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out << "# rotorpair trajectory\n";
    for (const auto& [k, v] : header_fields(traj)) out << "# " << k << " = " << v << "\n";
    const auto cols = trajectory_columns(traj);
    for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
    for (const auto& s : traj.samples) {
        const auto vals = state_values(s, traj.params.n);
        for (size_t i = 0; i < vals.size(); ++i) out << (i ? "," : "") << fmt_g17(vals[i]);
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

void write_trajectory_jsonl(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    const auto cols = trajectory_columns(traj);
    for (const auto& s : traj.samples) {
        const auto vals = state_values(s, traj.params.n);
        out << "{";
        for (size_t i = 0; i < vals.size(); ++i) {
            out << (i ? "," : "") << "\"" << cols[i] << "\":" << fmt_g17(vals[i]);
        }
        out << "}\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

LoadedTrajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    LoadedTrajectory lt;
    std::string line;
    bool have_columns = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                std::string k = line.substr(1, eq - 1);
                std::string v = line.substr(eq + 1);
                const auto strip = [](std::string& s) {
                    while (!s.empty() && (s.front() == ' ')) s.erase(s.begin());
                    while (!s.empty() && (s.back() == ' ')) s.pop_back();
                };
                strip(k);
                strip(v);
                lt.header[k] = v;
            }
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!have_columns) {
            while (std::getline(ss, cell, ',')) lt.columns.push_back(cell);
            have_columns = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        if (row.size() != lt.columns.size()) throw IoError("csv row width mismatch in " + path);
        lt.rows.push_back(std::move(row));
    }
    return lt;
}

LoadedTrajectory read_trajectory_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    LoadedTrajectory lt;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        size_t pos = 0;
        while (true) {
            const auto q1 = line.find('"', pos);
            if (q1 == std::string::npos) break;
            const auto q2 = line.find('"', q1 + 1);
            const auto colon = line.find(':', q2);
            auto end = line.find_first_of(",}", colon);
            const std::string key = line.substr(q1 + 1, q2 - q1 - 1);
            const std::string num = line.substr(colon + 1, end - colon - 1);
            if (lt.rows.empty()) lt.columns.push_back(key);
            row.push_back(std::strtod(num.c_str(), nullptr));
            pos = end + 1;
            if (line[end] == '}') break;
        }
        if (!row.empty()) lt.rows.push_back(std::move(row));
    }
    return lt;
}

std::string format_summary(const std::string& title,
                           const std::vector<std::pair<std::string, std::string>>& fields) {
    std::string s = "== " + title + " ==\n";
    for (const auto& [k, v] : fields) s += k + ": " + v + "\n";
    return s;
}

} // namespace rotorpair
