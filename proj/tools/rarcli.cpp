#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "rar/config.hpp"
#include "rar/runner.hpp"

namespace {

// 0 = success, 2 = configuration error, 3 = numerical failure
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void write_output(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    // Build first, write once: a failed run leaves no partial file.
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw rar::ConfigError("cannot open output file " + out_path);
    out << content;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Response-adaptive randomization simulator"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run replicated trials from a config file");
    std::string config_path, out_path;
    std::uint64_t seed_override = 0;
    long long reps_override = 0;
    int jobs_override = 0;
    std::string format_override;
    sim->add_option("--config", config_path, "Config file (flat key = value)")->required();
    sim->add_option("--seed", seed_override, "Override config seed");
    sim->add_option("--reps", reps_override, "Override replication count");
    sim->add_option("--jobs", jobs_override, "Override parallel worker count");
    sim->add_option("--format", format_override, "Override output format (csv|json)");
    sim->add_option("--out", out_path, "Write output to a file instead of stdout");

    // target
    auto* tgt = app.add_subcommand("target", "Evaluate a target allocation at true theta");
    std::string t_target = "urn", t_model = "bernoulli", t_format = "csv";
    std::string t_p, t_mu, t_sigma2, t_rate;
    double t_c = 0.0;
    std::string t_bm_form = "symmetric";
    tgt->add_option("--target", t_target, "urn|neyman|rsihr|zr|bm|fixed");
    tgt->add_option("--model", t_model, "bernoulli|normal|exponential");
    tgt->add_option("--p", t_p, "Bernoulli success probabilities, comma separated");
    tgt->add_option("--mu", t_mu, "Normal means");
    tgt->add_option("--sigma2", t_sigma2, "Normal variances");
    tgt->add_option("--rate", t_rate, "Exponential rates");
    tgt->add_option("--c", t_c, "Threshold for the bm target");
    tgt->add_option("--bm-form", t_bm_form, "symmetric|as-printed");
    tgt->add_option("--format", t_format, "csv|json");

    // variance-table
    auto* vt = app.add_subcommand("variance-table",
                                  "Analytic vs Monte Carlo variances over a binary grid");
    std::string v_designs = "rpw,dl,seu,smlp,gdl,dbcd";
    std::string v_p1 = "0.7", v_p2 = "0.4", v_format = "csv";
    int v_n = 2000;
    long long v_reps = 2000;
    std::uint64_t v_seed = 1;
    double v_gamma = 2.0, v_alpha = 0.5;
    vt->add_option("--designs", v_designs, "Comma-separated design ids");
    vt->add_option("--p1", v_p1, "Grid of arm-1 success probabilities");
    vt->add_option("--p2", v_p2, "Grid of arm-2 success probabilities");
    vt->add_option("--n", v_n, "Trial size");
    vt->add_option("--reps", v_reps, "Replications per cell");
    vt->add_option("--seed", v_seed, "Master seed");
    vt->add_option("--gamma", v_gamma, "DBCD gamma");
    vt->add_option("--alpha", v_alpha, "ERADE alpha");
    vt->add_option("--format", v_format, "csv|json");

    // bias-table
    auto* bt = app.add_subcommand("bias-table",
                                  "Selection bias and randomness deficit per design");
    std::string b_designs = "cr,rpw,dl,smlp,dbcd,erade,serade";
    std::string b_format = "csv";
    double b_p1 = 0.7, b_p2 = 0.4, b_gamma = 2.0, b_alpha = 0.5;
    int b_n = 2000;
    long long b_reps = 2000;
    std::uint64_t b_seed = 1;
    bt->add_option("--designs", b_designs, "Comma-separated design ids");
    bt->add_option("--p1", b_p1, "Arm-1 success probability");
    bt->add_option("--p2", b_p2, "Arm-2 success probability");
    bt->add_option("--n", b_n, "Trial size");
    bt->add_option("--reps", b_reps, "Replications");
    bt->add_option("--seed", b_seed, "Master seed");
    bt->add_option("--gamma", b_gamma, "DBCD gamma");
    bt->add_option("--alpha", b_alpha, "ERADE alpha");
    bt->add_option("--format", b_format, "csv|json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            rar::SimulationConfig config = rar::SimulationConfig::parse_file(config_path);
            if (sim->count("--seed")) config.seed = seed_override;
            if (sim->count("--reps")) config.reps = reps_override;
            if (sim->count("--jobs")) config.jobs = jobs_override;
            if (sim->count("--format")) config.format = format_override;
            config.validate();
            rar::SimulateResult result = rar::run_simulation(config);
            write_output(result.table.render(config.format), out_path);
        } else if (tgt->parsed()) {
            rar::SimulationConfig config;
            config.target = t_target;
            config.model = t_model;
            config.p = rar::parse_double_list(t_p);
            config.mu = rar::parse_double_list(t_mu);
            config.sigma2 = rar::parse_double_list(t_sigma2);
            config.rate = rar::parse_double_list(t_rate);
            config.target_c = t_c;
            config.bm_form = t_bm_form;
            rar::Table table = rar::target_table(config);
            write_output(table.render(t_format), out_path);
        } else if (vt->parsed()) {
            rar::Table table = rar::variance_table(
                split_list(v_designs), rar::parse_double_list(v_p1),
                rar::parse_double_list(v_p2), v_n, v_reps, v_seed, v_gamma, v_alpha);
            write_output(table.render(v_format), out_path);
        } else if (bt->parsed()) {
            rar::Table table = rar::bias_table(split_list(b_designs), b_p1, b_p2, b_n,
                                               b_reps, b_seed, b_gamma, b_alpha);
            write_output(table.render(b_format), out_path);
        }
    } catch (const rar::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
