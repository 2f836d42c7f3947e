#include "rar/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace rar {

std::string format_g6(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string Table::to_csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ",";
        out << header[i];
    }
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << row[i];
        }
        out << "\n";
    }
    return out.str();
}

std::string Table::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json obj;
        for (std::size_t i = 0; i < header.size(); ++i)
            obj[header[i]] = i < row.size() ? row[i] : "";
        arr.push_back(obj);
    }
    return arr.dump(2) + "\n";
}

std::string Table::render(const std::string& format) const {
    return format == "json" ? to_json() : to_csv();
}

ResponseModel build_model(const SimulationConfig& c) {
    ResponseModel model;
    if (c.model == "bernoulli") {
        if (c.p.size() < 2) throw ConfigError("config: model.p needs >= 2 arms");
        model = ResponseModel::bernoulli(c.p);
    } else if (c.model == "normal") {
        if (c.mu.size() < 2) throw ConfigError("config: model.mu needs >= 2 arms");
        std::vector<double> s2 = c.sigma2;
        if (s2.size() == 1) s2.assign(c.mu.size(), c.sigma2[0]);
        if (s2.size() != c.mu.size())
            throw ConfigError("config: model.sigma2 length mismatch");
        model = ResponseModel::normal(c.mu, s2);
    } else if (c.model == "exponential") {
        if (c.rate.size() < 2) throw ConfigError("config: model.rate needs >= 2 arms");
        model = ResponseModel::exponential(c.rate);
    } else {
        throw ConfigError("config: unknown model '" + c.model + "'");
    }
    try {
        model.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return model;
}

std::shared_ptr<TargetAllocation> build_target(const SimulationConfig& c,
                                               const ResponseModel& model) {
    std::string id = c.target;
    if (id.empty()) {
        if (model.family == Family::bernoulli) id = "urn";
        else if (model.family == Family::normal) id = "neyman";
        else throw ConfigError("config: target required for this model family");
    }
    try {
        if (id == "urn") {
            if (model.family != Family::bernoulli)
                throw ConfigError("config: urn target needs a bernoulli model");
            return make_urn_target(model.arms());
        }
        if (id == "neyman") return make_neyman_target(model.family);
        if (id == "rsihr") {
            if (model.family != Family::bernoulli)
                throw ConfigError("config: rsihr target needs a bernoulli model");
            return make_rsihr_target();
        }
        if (id == "zr") {
            if (model.family != Family::normal)
                throw ConfigError("config: zr target needs a normal model");
            return make_zr_normal_target();
        }
        if (id == "bm") {
            if (model.family != Family::normal)
                throw ConfigError("config: bm target needs a normal model");
            return make_bm_target(c.target_c, c.bm_form == "symmetric");
        }
        if (id == "fixed") {
            if (static_cast<int>(c.fixed_rho.size()) != model.arms())
                throw ConfigError("config: target.fixed length must match the arm count");
            Eigen::VectorXd r =
                Eigen::Map<const Eigen::VectorXd>(c.fixed_rho.data(), c.fixed_rho.size());
            return make_fixed_target(r, model.family);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    throw ConfigError("config: unknown target '" + id + "'");
}

namespace {
EstimatorOptions estimator_options(const SimulationConfig& c) {
    EstimatorOptions o;
    o.raw_mle = (c.estimator == "mle");
    return o;
}

double scalar_or(const std::vector<double>& v, double fallback) {
    if (v.empty()) return fallback;
    if (v.size() != 1) throw ConfigError("config: expected a single value");
    return v[0];
}
}  // namespace

std::unique_ptr<DesignPolicy> build_policy(const SimulationConfig& c,
                                           const ResponseModel& model,
                                           std::shared_ptr<TargetAllocation> target) {
    const int k = model.arms();
    const std::string& d = c.design;
    EstimatorOptions eopts = estimator_options(c);
    try {
        if (d == "cr") {
            if (!c.fixed_rho.empty() && c.target == "fixed") {
                Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(c.fixed_rho.data(),
                                                                      c.fixed_rho.size());
                return std::make_unique<CompleteRandomizationPolicy>(r);
            }
            return std::make_unique<CompleteRandomizationPolicy>(k);
        }
        if (d == "pw") {
            if (model.family != Family::bernoulli || k != 2)
                throw ConfigError("config: pw needs a two-arm bernoulli model");
            return std::make_unique<PlayTheWinnerPolicy>();
        }
        if (d == "rpw") {
            if (model.family != Family::bernoulli || k != 2)
                throw ConfigError("config: rpw needs a two-arm bernoulli model");
            std::vector<double> y = c.urn0.empty() ? std::vector<double>{1.0, 1.0} : c.urn0;
            if (y.size() != 2) throw ConfigError("config: design.urn0 needs 2 entries");
            return make_rpw_policy(y[0], y[1]);
        }
        if (d == "wei") {
            if (model.family != Family::bernoulli)
                throw ConfigError("config: wei needs a bernoulli model");
            return make_wei_policy(k, scalar_or(c.urn0, 1.0));
        }
        if (d == "seu")
            return make_seu_policy(target, model.family, c.beta, scalar_or(c.urn0, 1.0),
                                   eopts);
        if (d == "dl") {
            if (model.family != Family::bernoulli)
                throw ConfigError("config: dl needs a bernoulli model");
            if (!c.target.empty() && c.target != "urn")
                throw ConfigError("config: dl targets the urn allocation only");
            return make_dl_policy(k, c.imm0, scalar_or(c.urn0, 1.0));
        }
        if (d == "gdl")
            return make_gdl_policy(target, model.family, c.beta, c.imm0,
                                   scalar_or(c.urn0, 1.0), eopts);
        if (d == "rru") {
            if (model.family != Family::bernoulli)
                throw ConfigError("config: rru needs a bernoulli model");
            return make_rru_policy(k, c.reinforce, scalar_or(c.urn0, 1.0));
        }
        if (d == "smlp")
            return std::make_unique<SmlpPolicy>(target, model.family, eopts, c.clamp);
        if (d == "dbcd")
            return std::make_unique<DbcdPolicy>(target, model.family, c.gamma, eopts,
                                                c.clamp);
        if (d == "erade")
            return std::make_unique<EradePolicy>(target, model.family, c.alpha, eopts,
                                                 c.clamp);
        if (d == "serade")
            return std::make_unique<SmoothedEradePolicy>(target, model.family, c.gamma,
                                                         eopts, c.clamp);
        if (d == "thompson") {
            if (model.family != Family::bernoulli || k != 2)
                throw ConfigError("config: thompson needs a two-arm bernoulli model");
            return std::make_unique<ThompsonPolicy>(static_cast<int>(c.n), c.thompson_c);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    throw ConfigError("config: unknown design '" + d + "'");
}

WarmStart build_warm_start(const SimulationConfig& c, const ResponseModel& model) {
    WarmStart w;
    if (c.warm_mode == "restricted-block") {
        w.mode = WarmStart::Mode::restricted_block;
        w.m0 = c.warm_m0;
    } else if (c.warm_mode == "fixed-guess") {
        w.mode = WarmStart::Mode::fixed_guess;
    } else {
        w.mode = WarmStart::Mode::bayes_shrinkage;
    }
    if (!c.theta0.empty()) {
        const int d = model.param_dim();
        if (static_cast<int>(c.theta0.size()) != d * model.arms())
            throw ConfigError("config: warm.theta0 length must be arms * param-dim");
        for (int a = 0; a < model.arms(); ++a)
            w.theta0.push_back(Eigen::Map<const Eigen::VectorXd>(c.theta0.data() + a * d, d));
    } else if (c.warm_mode == "fixed-guess") {
        throw ConfigError("config: warm.mode fixed-guess requires warm.theta0");
    }
    return w;
}

std::unique_ptr<DelayModel> build_delay(const SimulationConfig& c,
                                        const ResponseModel& model) {
    if (!c.delay_enabled) return nullptr;
    std::vector<double> means = c.delay_response_mean;
    if (means.empty()) means.assign(model.arms(), 1.0);
    if (means.size() == 1) means.assign(model.arms(), means[0]);
    if (static_cast<int>(means.size()) != model.arms())
        throw ConfigError("config: delay.response_mean length mismatch");
    return std::make_unique<ExponentialDelay>(c.delay_entry_mean, std::move(means));
}

Eigen::VectorXd reference_allocation(const SimulationConfig& c, const ResponseModel& model,
                                     const TargetAllocation& target) {
    const int k = model.arms();
    const std::string& d = c.design;
    if (d == "cr") {
        if (!c.fixed_rho.empty() && c.target == "fixed")
            return Eigen::Map<const Eigen::VectorXd>(c.fixed_rho.data(), c.fixed_rho.size());
        return Eigen::VectorXd::Constant(k, 1.0 / k);
    }
    if (d == "rpw" || d == "wei" || d == "dl" || d == "pw") {
        Eigen::VectorXd q(k);
        for (int i = 0; i < k; ++i) q[i] = 1.0 - model.theta[i][0];
        return urn_target(q);
    }
    if (d == "rru") {
        int best = 0;
        for (int i = 1; i < k; ++i)
            if (model.theta[i][0] > model.theta[best][0]) best = i;
        Eigen::VectorXd r = Eigen::VectorXd::Zero(k);
        r[best] = 1.0;
        return r;
    }
    if (d == "thompson") {
        double p1 = model.theta[0][0], p2 = model.theta[1][0];
        Eigen::VectorXd r(2);
        if (p1 == p2) r << 0.5, 0.5;
        else if (p1 > p2) r << 1.0, 0.0;
        else r << 0.0, 1.0;
        return r;
    }
    return target.rho(model.theta);
}

ReplicationSummary run_replications(
    const std::function<std::unique_ptr<DesignPolicy>()>& policy_factory,
    const ResponseModel& model, int n, long long reps, std::uint64_t seed,
    const WarmStart& warm, const DelayModel* delay, const Eigen::VectorXd& rho_ref,
    int jobs) {
    ReplicationSummary out;
    out.arms = model.arms();
    out.n = n;
    out.props.resize(reps);
    out.sb.resize(reps);
    out.mlr.resize(reps);
    out.failures.resize(reps);
    out.wald_z.resize(reps);
    out.reject.resize(reps);

    std::atomic<long long> next{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;

    auto worker = [&]() {
        try {
            while (true) {
                long long r = next.fetch_add(1);
                if (r >= reps || failed.load()) break;
                std::unique_ptr<DesignPolicy> policy = policy_factory();
                TraceMetrics trace(rho_ref);
                TrialState state =
                    run_trial(*policy, model, n, warm, delay, seed, r, &trace);
                Eigen::VectorXd prop(out.arms);
                for (int k = 0; k < out.arms; ++k)
                    prop[k] = static_cast<double>(state.counts[k]) / n;
                out.props[r] = prop;
                out.sb[r] = trace.selection_bias();
                out.mlr[r] = trace.mlr();
                if (model.family == Family::bernoulli) {
                    double successes = 0.0;
                    for (double x : state.responses) successes += x;
                    out.failures[r] = n - successes;
                } else {
                    out.failures[r] = std::numeric_limits<double>::quiet_NaN();
                }
                if (out.arms == 2 && state.counts[0] > 0 && state.counts[1] > 0) {
                    Eigen::VectorXd cnt(2), sum(2), sumsq(2);
                    cnt.setZero();
                    sum.setZero();
                    sumsq.setZero();
                    for (int j = 0; j < n; ++j) {
                        int a = state.assignments[j];
                        cnt[a] += 1.0;
                        sum[a] += state.responses[j];
                        sumsq[a] += state.responses[j] * state.responses[j];
                    }
                    WaldResult w = wald_test(cnt, sum, sumsq, model.family);
                    out.wald_z[r] = w.z;
                    out.reject[r] = w.reject;
                } else {
                    out.wald_z[r] = std::numeric_limits<double>::quiet_NaN();
                    out.reject[r] = 0;
                }
            }
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            failed = true;
            if (error_message.empty()) error_message = e.what();
        }
    };

    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failed) throw std::runtime_error(error_message);
    return out;
}

namespace {

double sb_reference(const SimulationConfig& c, const Eigen::VectorXd& rho_ref) {
    const std::string& d = c.design;
    const double rho_max = rho_ref.maxCoeff();
    if (d == "cr") return 1.0 / rho_ref.size();
    if (d == "smlp" || d == "dbcd" || d == "seu" || d == "serade" || d == "rpw" ||
        d == "wei")
        return rho_max;
    if (d == "erade") {
        double prod = rho_ref[0] * rho_ref[1];
        return rho_max <= 1.0 / (2.0 * c.alpha) ? 1.0 - 2.0 * c.alpha * prod : rho_max;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double mlr_reference(const SimulationConfig& c, const Eigen::VectorXd& rho_ref) {
    const std::string& d = c.design;
    if (d == "cr" || d == "smlp" || d == "dbcd" || d == "seu" || d == "serade" ||
        d == "rpw" || d == "wei")
        return 0.0;
    if (d == "erade") return 2.0 * (1.0 - c.alpha) * rho_ref[0] * rho_ref[1];
    return std::numeric_limits<double>::quiet_NaN();
}

double sqrtn_mlr_reference(const SimulationConfig& c, const ResponseModel& model,
                           const TargetAllocation& target) {
    const std::string& d = c.design;
    if (model.arms() != 2) return std::numeric_limits<double>::quiet_NaN();
    if (d == "smlp" || d == "dbcd") {
        double gamma = (d == "smlp") ? 0.0 : c.gamma;
        double slb = sigma_lb(target, model.theta)(0, 0);
        Eigen::VectorXd rho = target.rho(model.theta);
        double s2 = (gamma * gamma * rho[0] * rho[1] + (1.0 + gamma) * (1.0 + gamma) * slb) /
                    (1.0 + 2.0 * gamma);
        return std::sqrt(8.0 / M_PI) * std::sqrt(s2);
    }
    if (d == "rpw") {
        double q1 = 1.0 - model.theta[0][0], q2 = 1.0 - model.theta[1][0];
        double s = q1 + q2;
        if (s <= 0.5) return std::numeric_limits<double>::infinity();
        double s2 = q1 * q2 / ((2.0 * s - 1.0) * s * s);
        return std::sqrt(8.0 / M_PI) * std::sqrt(s2);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

ReferenceVariance reference_variance_or_nan(const SimulationConfig& c,
                                            const ResponseModel& model,
                                            const TargetAllocation& target) {
    ReferenceVarianceParams params;
    params.gamma = c.gamma;
    params.alpha = c.alpha;
    try {
        return reference_variance(c.design, target, model.theta, params);
    } catch (const std::exception&) {
        ReferenceVariance rv;
        rv.sigma = Eigen::MatrixXd::Constant(model.arms(), model.arms(),
                                             std::numeric_limits<double>::quiet_NaN());
        return rv;
    }
}

std::string rel_error_str(double emp, double ref) {
    if (std::isnan(ref) || std::isinf(ref) || ref == 0.0) return "";
    return format_g6(std::abs(emp - ref) / std::abs(ref));
}

}  // namespace

SimulateResult run_simulation(const SimulationConfig& config) {
    config.validate();
    ResponseModel model = build_model(config);
    std::shared_ptr<TargetAllocation> target = build_target(config, model);
    WarmStart warm = build_warm_start(config, model);
    std::unique_ptr<DelayModel> delay = build_delay(config, model);
    auto factory = [&]() { return build_policy(config, model, target); };
    factory();  // surface design/model mismatches before anything runs
    Eigen::VectorXd rho_ref = reference_allocation(config, model, *target);

    SimulateResult result;

    if (config.reps == 1) {
        // Single-trial trace mode: per-step allocation probabilities.
        std::unique_ptr<DesignPolicy> policy = factory();
        TraceMetrics trace(rho_ref);
        std::vector<Eigen::VectorXd> probs;
        trace.capture = &probs;
        TrialState state = run_trial(*policy, model, static_cast<int>(config.n), warm,
                                     delay.get(), config.seed, 0, &trace);
        result.trace = true;
        Table& t = result.table;
        t.header = {"m", "arm", "outcome"};
        for (int k = 0; k < model.arms(); ++k)
            t.header.push_back("p_" + std::to_string(k + 1));
        for (int m = 0; m < state.n(); ++m) {
            std::vector<std::string> row{std::to_string(m + 1),
                                         std::to_string(state.assignments[m] + 1),
                                         format_g6(state.responses[m])};
            for (int k = 0; k < model.arms(); ++k) row.push_back(format_g6(probs[m][k]));
            t.rows.push_back(std::move(row));
        }
        result.summary.arms = model.arms();
        result.summary.n = config.n;
        return result;
    }

    result.summary =
        run_replications(factory, model, static_cast<int>(config.n), config.reps,
                         config.seed, warm, delay.get(), rho_ref, config.jobs);
    const ReplicationSummary& s = result.summary;

    ReferenceVariance rv = reference_variance_or_nan(config, model, *target);
    const bool infinite_regime = rv.regime == VarianceRegime::infinite;

    Table& t = result.table;
    t.header = {"metric", "arm", "empirical", "reference", "rel_error", "regime"};
    Eigen::VectorXd mean_props = s.mean_props();
    for (int k = 0; k < model.arms(); ++k)
        t.rows.push_back({"mean_prop", std::to_string(k + 1), format_g6(mean_props[k]),
                          format_g6(rho_ref[k]), rel_error_str(mean_props[k], rho_ref[k]),
                          ""});
    for (int k = 0; k < model.arms(); ++k) {
        double emp = s.scaled_variance(k);
        double ref = rv.sigma(k, k);
        t.rows.push_back({"var_scaled", std::to_string(k + 1), format_g6(emp),
                          infinite_regime ? "inf" : format_g6(ref),
                          infinite_regime ? "" : rel_error_str(emp, ref),
                          infinite_regime ? "infinite" : "normal"});
        t.rows.push_back({"var_scaled_se", std::to_string(k + 1),
                          format_g6(s.scaled_variance_se(k)), "", "", ""});
    }
    double sb_ref = sb_reference(config, rho_ref);
    t.rows.push_back({"sb", "", format_g6(s.mean_sb()), format_g6(sb_ref),
                      rel_error_str(s.mean_sb(), sb_ref), ""});
    double mlr_ref = mlr_reference(config, rho_ref);
    t.rows.push_back({"mlr", "", format_g6(s.mean_mlr()), format_g6(mlr_ref), "", ""});
    double sq_ref = sqrtn_mlr_reference(config, model, *target);
    double sq_emp = std::sqrt(static_cast<double>(config.n)) * s.mean_mlr();
    t.rows.push_back({"sqrt_n_mlr", "", format_g6(sq_emp), format_g6(sq_ref),
                      rel_error_str(sq_emp, sq_ref), ""});
    t.rows.push_back({"reject_rate", "", format_g6(s.reject_rate()), "", "", ""});
    t.rows.push_back({"mean_failures", "", format_g6(s.mean_failures()), "", "", ""});
    return result;
}

Table variance_table(const std::vector<std::string>& designs,
                     const std::vector<double>& p1_grid,
                     const std::vector<double>& p2_grid, int n, long long reps,
                     std::uint64_t seed, double gamma, double alpha) {
    Table t;
    t.header = {"design", "p1", "p2", "analytic", "empirical", "rel_error", "regime"};
    for (const std::string& d : designs) {
        for (double p1 : p1_grid) {
            for (double p2 : p2_grid) {
                SimulationConfig c;
                c.design = d;
                c.gamma = gamma;
                c.alpha = alpha;
                c.model = "bernoulli";
                c.p = {p1, p2};
                c.target = "urn";
                c.n = n;
                c.reps = reps;
                c.seed = derive_seed(seed, std::hash<std::string>{}(d),
                                     static_cast<std::uint64_t>(p1 * 1e6) * 1000003 +
                                         static_cast<std::uint64_t>(p2 * 1e6));
                ResponseModel model = build_model(c);
                std::shared_ptr<TargetAllocation> target = build_target(c, model);
                WarmStart warm = build_warm_start(c, model);
                auto factory = [&]() { return build_policy(c, model, target); };
                factory();
                Eigen::VectorXd rho_ref = reference_allocation(c, model, *target);
                ReplicationSummary s = run_replications(factory, model, n, reps, c.seed,
                                                        warm, nullptr, rho_ref, 1);
                ReferenceVariance rv = reference_variance_or_nan(c, model, *target);
                double emp = s.scaled_variance(0);
                bool infinite = rv.regime == VarianceRegime::infinite;
                t.rows.push_back({d, format_g6(p1), format_g6(p2),
                                  infinite ? "inf" : format_g6(rv.sigma(0, 0)),
                                  format_g6(emp),
                                  infinite ? "" : rel_error_str(emp, rv.sigma(0, 0)),
                                  infinite ? "infinite" : "normal"});
            }
        }
    }
    return t;
}

Table bias_table(const std::vector<std::string>& designs, double p1, double p2, int n,
                 long long reps, std::uint64_t seed, double gamma, double alpha) {
    Table t;
    t.header = {"design", "p1",      "p2",  "sb",      "sb_ref",
                "mlr",    "mlr_ref", "sqrt_n_mlr", "sqrt_n_mlr_ref"};
    for (const std::string& d : designs) {
        SimulationConfig c;
        c.design = d;
        c.gamma = gamma;
        c.alpha = alpha;
        c.model = "bernoulli";
        c.p = {p1, p2};
        c.target = "urn";
        c.n = n;
        c.reps = reps;
        c.seed = derive_seed(seed, std::hash<std::string>{}(d), 0);
        ResponseModel model = build_model(c);
        std::shared_ptr<TargetAllocation> target = build_target(c, model);
        WarmStart warm = build_warm_start(c, model);
        auto factory = [&]() { return build_policy(c, model, target); };
        factory();
        Eigen::VectorXd rho_ref = reference_allocation(c, model, *target);
        ReplicationSummary s =
            run_replications(factory, model, n, reps, c.seed, warm, nullptr, rho_ref, 1);
        t.rows.push_back({d, format_g6(p1), format_g6(p2), format_g6(s.mean_sb()),
                          format_g6(sb_reference(c, rho_ref)), format_g6(s.mean_mlr()),
                          format_g6(mlr_reference(c, rho_ref)),
                          format_g6(std::sqrt(static_cast<double>(n)) * s.mean_mlr()),
                          format_g6(sqrtn_mlr_reference(c, model, *target))});
    }
    return t;
}

Table target_table(const SimulationConfig& config) {
    ResponseModel model = build_model(config);
    std::shared_ptr<TargetAllocation> target = build_target(config, model);
    Eigen::VectorXd rho = target->rho(model.theta);
    Eigen::MatrixXd grad = target->gradient(model.theta);
    Eigen::MatrixXd lb = sigma_lb(*target, model.theta);
    Table t;
    t.header = {"quantity", "i", "j", "value"};
    for (int k = 0; k < rho.size(); ++k)
        t.rows.push_back({"rho", std::to_string(k + 1), "", format_g6(rho[k])});
    for (int i = 0; i < grad.rows(); ++i)
        for (int j = 0; j < grad.cols(); ++j)
            t.rows.push_back({"gradient", std::to_string(i + 1), std::to_string(j + 1),
                              format_g6(grad(i, j))});
    for (int i = 0; i < lb.rows(); ++i)
        for (int j = 0; j < lb.cols(); ++j)
            t.rows.push_back({"sigma_lb", std::to_string(i + 1), std::to_string(j + 1),
                              format_g6(lb(i, j))});
    return t;
}

}  // namespace rar
