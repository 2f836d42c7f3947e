#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rar/coins.hpp"
#include "rar/config.hpp"
#include "rar/delay.hpp"
#include "rar/metrics.hpp"
#include "rar/urns.hpp"

namespace rar {

/// Column-named string table with the stable 6-significant-digit formatting
/// used by every CLI emitter.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
    std::string to_json() const;
    std::string render(const std::string& format) const;
};

std::string format_g6(double v);  // "" for NaN

// Config-driven factories.
ResponseModel build_model(const SimulationConfig& config);
std::shared_ptr<TargetAllocation> build_target(const SimulationConfig& config,
                                               const ResponseModel& model);
std::unique_ptr<DesignPolicy> build_policy(const SimulationConfig& config,
                                           const ResponseModel& model,
                                           std::shared_ptr<TargetAllocation> target);
WarmStart build_warm_start(const SimulationConfig& config, const ResponseModel& model);
std::unique_ptr<DelayModel> build_delay(const SimulationConfig& config,
                                        const ResponseModel& model);

/// Limiting allocation used to center the metrics for this design.
Eigen::VectorXd reference_allocation(const SimulationConfig& config,
                                     const ResponseModel& model,
                                     const TargetAllocation& target);

/// Runs `reps` independent trials of a freshly built policy per replication.
/// Replication r uses streams derived from (seed, r), so results do not
/// depend on the parallelism degree.
ReplicationSummary run_replications(
    const std::function<std::unique_ptr<DesignPolicy>()>& policy_factory,
    const ResponseModel& model, int n, long long reps, std::uint64_t seed,
    const WarmStart& warm, const DelayModel* delay, const Eigen::VectorXd& rho_ref,
    int jobs = 1);

struct SimulateResult {
    ReplicationSummary summary;
    Table table;        // summary table, or the per-step trace when reps == 1
    bool trace = false;
};

SimulateResult run_simulation(const SimulationConfig& config);

/// Closed-form vs Monte Carlo variance rows over a grid of binary models.
Table variance_table(const std::vector<std::string>& designs,
                     const std::vector<double>& p1_grid,
                     const std::vector<double>& p2_grid, int n, long long reps,
                     std::uint64_t seed, double gamma, double alpha);

/// Selection bias and randomness-deficit rows per design.
Table bias_table(const std::vector<std::string>& designs, double p1, double p2, int n,
                 long long reps, std::uint64_t seed, double gamma, double alpha);

/// Target proportions, gradient and lower bound at the model's true theta.
Table target_table(const SimulationConfig& config);

}  // namespace rar
