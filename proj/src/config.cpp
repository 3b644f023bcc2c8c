#include "rotorpair/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace rotorpair {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        if (!std::isfinite(d)) throw std::invalid_argument("non-finite");
        return d;
    } catch (const std::exception&) {
        fail(origin, line, "field '" + key + "': invalid number '" + v + "'");
    }
}

std::vector<double> parse_list(const std::string& origin, int line, const std::string& key,
                               const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(origin, line, "field '" + key + "': empty list element");
        out.push_back(parse_double(origin, line, key, item));
    }
    if (out.empty()) fail(origin, line, "field '" + key + "': empty list");
    return out;
}

std::vector<double> parse_matrix(const std::string& origin, int line, const std::string& key,
                                 const std::string& v) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(v);
    std::string row;
    while (std::getline(ss, row, ';')) {
        rows.push_back(parse_list(origin, line, key, trim(row)));
    }
    const size_t n = rows.size();
    for (const auto& r : rows) {
        if (r.size() != n) fail(origin, line, "field '" + key + "': matrix must be square");
    }
    std::vector<double> flat;
    flat.reserve(n * n);
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    return flat;
}

Vector3 parse_vec3(const std::string& origin, int line, const std::string& key,
                   const std::string& v) {
    const auto list = parse_list(origin, line, key, v);
    if (list.size() != 3) fail(origin, line, "field '" + key + "': expected 3 components");
    return {list[0], list[1], list[2]};
}

} // namespace

const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> defaults{
        {"jacobi", 1e-10},          // relative Jacobi residual
        {"skewness", 1e-12},        // relative |M + M^T|
        {"conservation", 1e-6},     // relative invariant drift, h = 1e-3
        {"oracle", 1e-6},           // reduced_rhs vs finite differences
        {"flow_tracking", 1e-8},    // exact reduced-flow solution vs RK4
        {"model_consistency", 1e-8},// closed-form family vs its own model
        {"eps0_exact", 1e-8},       // RK4 vs matrix-exponential rotation
        {"quadrature_mean", 1e-10}, // <integrand> vs 1/K
        {"time_reversal", 1e-7},
        {"period_match", 1e-3},     // detected vs quadrature slow period
    };
    return defaults;
}

ModelParams RunConfig::params() const {
    ModelParams p;
    p.n = n;
    p.eps = eps;
    if (omega_plus) {
        p.omega_plus = SkewMatrix::from_dense(n, *omega_plus);
    } else {
        p.omega_plus = axis_omega(n, omega);
    }
    if (omega_minus) {
        p.omega_minus = SkewMatrix::from_dense(n, *omega_minus);
    } else if (omega_plus) {
        p.omega_minus = p.omega_plus;
    } else {
        p.omega_minus = axis_omega(n, omega);
    }
    p.validate();
    return p;
}

CoupledState RunConfig::initial_state() const {
    CoupledState s;
    s.t = 0.0;
    if (n == 3 && !A0 && !B0) {
        s.A = hat(a0);
        s.B = hat(b0);
        return s;
    }
    if (!A0 || !B0) {
        throw ConfigError("initial.A and initial.B are required for n != 3");
    }
    s.A = SkewMatrix::from_dense(n, *A0);
    s.B = SkewMatrix::from_dense(n, *B0);
    return s;
}

double RunConfig::tol(const std::string& name) const {
    const auto it = tolerances.find(name);
    if (it != tolerances.end()) return it->second;
    const auto& d = default_tolerances();
    const auto dit = d.find(name);
    if (dit == d.end()) throw InvalidInputError("unknown tolerance name: " + name);
    return dit->second;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    bool n_set = false;

    // Raw matrix strings are re-parsed after n is known.
    std::map<std::string, std::pair<int, std::string>> matrix_fields;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(origin, lineno, "empty key");
        if (value.empty()) fail(origin, lineno, "field '" + key + "': empty value");

        if (key == "model.n") {
            cfg.n = static_cast<int>(parse_double(origin, lineno, key, value));
            if (cfg.n < 2) fail(origin, lineno, "field 'model.n': must be >= 2");
            n_set = true;
        } else if (key == "model.eps") {
            cfg.eps = parse_double(origin, lineno, key, value);
        } else if (key == "model.omega") {
            cfg.omega = parse_double(origin, lineno, key, value);
        } else if (key == "model.omega_plus" || key == "model.omega_minus" ||
                   key == "initial.A" || key == "initial.B") {
            matrix_fields[key] = {lineno, value};
        } else if (key == "initial.a") {
            cfg.a0 = parse_vec3(origin, lineno, key, value);
        } else if (key == "initial.b") {
            cfg.b0 = parse_vec3(origin, lineno, key, value);
        } else if (key == "run.h") {
            cfg.h = parse_double(origin, lineno, key, value);
            if (!(cfg.h > 0.0)) fail(origin, lineno, "field 'run.h': must be > 0");
        } else if (key == "run.t_end") {
            cfg.t_end = parse_double(origin, lineno, key, value);
            if (cfg.t_end < 0.0) fail(origin, lineno, "field 'run.t_end': must be >= 0");
        } else if (key == "run.sample_every") {
            cfg.sample_every = static_cast<int>(parse_double(origin, lineno, key, value));
            if (cfg.sample_every < 1) fail(origin, lineno, "field 'run.sample_every': must be >= 1");
        } else if (key == "output.path") {
            cfg.output_path = value;
        } else if (key == "output.format") {
            if (value != "csv" && value != "jsonl") {
                fail(origin, lineno, "field 'output.format': must be csv or jsonl");
            }
            cfg.format = value;
        } else if (key == "rng.seed") {
            try {
                cfg.seed = std::stoull(value);
            } catch (const std::exception&) {
                fail(origin, lineno, "field 'rng.seed': invalid unsigned integer");
            }
        } else if (key == "sweep.eps") {
            cfg.sweep_eps = parse_list(origin, lineno, key, value);
        } else if (key.rfind("verify.", 0) == 0) {
            const std::string name = key.substr(7);
            if (default_tolerances().find(name) == default_tolerances().end()) {
                fail(origin, lineno, "unknown tolerance '" + key + "'");
            }
            cfg.tolerances[name] = parse_double(origin, lineno, key, value);
        } else {
            fail(origin, lineno, "unknown key '" + key + "'");
        }
    }
    (void)n_set;

    for (const auto& [key, lv] : matrix_fields) {
        const auto flat = parse_matrix(origin, lv.first, key, lv.second);
        if (flat.size() != static_cast<size_t>(cfg.n) * cfg.n) {
            fail(origin, lv.first,
                 "field '" + key + "': expected " + std::to_string(cfg.n) + "x" +
                     std::to_string(cfg.n) + " matrix");
        }
        if (key == "model.omega_plus") cfg.omega_plus = flat;
        if (key == "model.omega_minus") cfg.omega_minus = flat;
        if (key == "initial.A") cfg.A0 = flat;
        if (key == "initial.B") cfg.B0 = flat;
    }

    // Surface matrix validation errors (skewness, finiteness) as config errors.
    try {
        cfg.params();
        cfg.initial_state();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

} // namespace rotorpair
