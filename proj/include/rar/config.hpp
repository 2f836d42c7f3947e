#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rar {

/// Invalid or inconsistent run configuration (CLI exit code 2, as opposed to
/// numerical failures which exit with 3).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key-value run description. Round-trips losslessly through the dotted
/// text format; unknown keys are rejected at parse time.
struct SimulationConfig {
    // design
    std::string design = "dbcd";
    double gamma = 2.0;                 // design.gamma
    double alpha = 0.5;                 // design.alpha
    double beta = 1.0;                  // design.beta
    double reinforce = 1.0;             // design.reinforce
    std::vector<double> urn0;           // design.urn0 (empty = preset default)
    double imm0 = 1.0;                  // design.imm0
    double thompson_c = -1.0;           // design.c; negative = adaptive schedule

    // target
    std::string target;                 // empty = family default
    double target_c = 0.0;              // target.c
    std::string bm_form = "symmetric";  // target.bm_form: symmetric | as-printed
    std::vector<double> fixed_rho;      // target.fixed

    // model
    std::string model = "bernoulli";
    std::vector<double> p;              // model.p
    std::vector<double> mu;             // model.mu
    std::vector<double> sigma2;         // model.sigma2
    std::vector<double> rate;           // model.rate

    // run
    long long n = 1000;
    long long reps = 1000;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::string format = "csv";

    // warm start
    std::string warm_mode = "restricted-block";
    int warm_m0 = 1;
    std::vector<double> theta0;         // warm.theta0, flattened arm-major

    // estimator
    std::string estimator = "shrinkage";  // shrinkage | mle
    double clamp = 0.01;                  // estimator.clamp

    // delay
    bool delay_enabled = false;
    double delay_entry_mean = 1.0;
    std::vector<double> delay_response_mean;  // scalar broadcasts to all arms

    bool operator==(const SimulationConfig&) const = default;

    static SimulationConfig parse(const std::string& text);
    static SimulationConfig parse_file(const std::string& path);
    std::string to_text() const;

    /// Structural checks that do not need the model built.
    void validate() const;
};

std::vector<double> parse_double_list(const std::string& value);
std::string format_double_list(const std::vector<double>& values);

}  // namespace rar
