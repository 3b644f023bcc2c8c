#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rotorpair/dynamics.hpp"

namespace rotorpair {

/// Parsed and validated run configuration. Format: `key = value` lines with
/// dotted section keys, `#` comments, vectors as comma lists and matrices as
/// semicolon-separated rows (see docs/config-schema.md). Unknown keys are
/// rejected with the offending line number.
struct RunConfig {
    int n = 3;
    double eps = 0.1;
    double omega = 1.0; // Omega+- = axis_omega(n, omega) unless given explicitly
    std::optional<std::vector<double>> omega_plus;  // dense n x n row-major
    std::optional<std::vector<double>> omega_minus;
    Vector3 a0{1.0, 1.0, 0.0};
    Vector3 b0{0.0, 0.0, 1.0};
    std::optional<std::vector<double>> A0; // dense n x n for n > 3
    std::optional<std::vector<double>> B0;
    double h = 1e-3;
    double t_end = 100.0;
    int sample_every = 10;
    std::string output_path;
    std::string format = "csv"; // csv | jsonl
    uint64_t seed = 1;
    std::vector<double> sweep_eps;
    std::map<std::string, double> tolerances; // verify.* overrides

    ModelParams params() const;
    CoupledState initial_state() const;

    /// Tolerance by short name ("jacobi", "conservation", ...), config
    /// override first, built-in default otherwise.
    double tol(const std::string& name) const;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

/// Built-in verify tolerance defaults, name -> value.
const std::map<std::string, double>& default_tolerances();

} // namespace rotorpair
