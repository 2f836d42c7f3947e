#include "rar/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rar {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("config: bad numeric value for " + key + ": '" + v + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("config: bad integer value for " + key + ": '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        std::uint64_t x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("config: bad seed value for " + key + ": '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("config: bad boolean value for " + key + ": '" + v + "'");
}

}  // namespace

std::vector<double> parse_double_list(const std::string& value) {
    std::vector<double> out;
    std::string v = trim(value);
    if (v.empty()) return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double("list", trim(item)));
    return out;
}

std::string format_double_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += format_double(values[i]);
    }
    return out;
}

SimulationConfig SimulationConfig::parse(const std::string& text) {
    SimulationConfig c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));

        if (key == "design") c.design = value;
        else if (key == "design.gamma") c.gamma = parse_double(key, value);
        else if (key == "design.alpha") c.alpha = parse_double(key, value);
        else if (key == "design.beta") c.beta = parse_double(key, value);
        else if (key == "design.reinforce") c.reinforce = parse_double(key, value);
        else if (key == "design.urn0") c.urn0 = parse_double_list(value);
        else if (key == "design.imm0") c.imm0 = parse_double(key, value);
        else if (key == "design.c") c.thompson_c = parse_double(key, value);
        else if (key == "target") c.target = value;
        else if (key == "target.c") c.target_c = parse_double(key, value);
        else if (key == "target.bm_form") c.bm_form = value;
        else if (key == "target.fixed") c.fixed_rho = parse_double_list(value);
        else if (key == "model") c.model = value;
        else if (key == "model.p") c.p = parse_double_list(value);
        else if (key == "model.mu") c.mu = parse_double_list(value);
        else if (key == "model.sigma2") c.sigma2 = parse_double_list(value);
        else if (key == "model.rate") c.rate = parse_double_list(value);
        else if (key == "n") c.n = parse_int(key, value);
        else if (key == "reps") c.reps = parse_int(key, value);
        else if (key == "seed") c.seed = parse_u64(key, value);
        else if (key == "jobs") c.jobs = static_cast<int>(parse_int(key, value));
        else if (key == "format") c.format = value;
        else if (key == "warm.mode") c.warm_mode = value;
        else if (key == "warm.m0") c.warm_m0 = static_cast<int>(parse_int(key, value));
        else if (key == "warm.theta0") c.theta0 = parse_double_list(value);
        else if (key == "estimator") c.estimator = value;
        else if (key == "estimator.clamp") c.clamp = parse_double(key, value);
        else if (key == "delay.enabled") c.delay_enabled = parse_bool(key, value);
        else if (key == "delay.entry_mean") c.delay_entry_mean = parse_double(key, value);
        else if (key == "delay.response_mean")
            c.delay_response_mean = parse_double_list(value);
        else
            throw ConfigError("config: unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

SimulationConfig SimulationConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string SimulationConfig::to_text() const {
    std::ostringstream out;
    out << "design = " << design << "\n";
    out << "design.gamma = " << format_double(gamma) << "\n";
    out << "design.alpha = " << format_double(alpha) << "\n";
    out << "design.beta = " << format_double(beta) << "\n";
    out << "design.reinforce = " << format_double(reinforce) << "\n";
    out << "design.urn0 = " << format_double_list(urn0) << "\n";
    out << "design.imm0 = " << format_double(imm0) << "\n";
    out << "design.c = " << format_double(thompson_c) << "\n";
    out << "target = " << target << "\n";
    out << "target.c = " << format_double(target_c) << "\n";
    out << "target.bm_form = " << bm_form << "\n";
    out << "target.fixed = " << format_double_list(fixed_rho) << "\n";
    out << "model = " << model << "\n";
    out << "model.p = " << format_double_list(p) << "\n";
    out << "model.mu = " << format_double_list(mu) << "\n";
    out << "model.sigma2 = " << format_double_list(sigma2) << "\n";
    out << "model.rate = " << format_double_list(rate) << "\n";
    out << "n = " << n << "\n";
    out << "reps = " << reps << "\n";
    out << "seed = " << seed << "\n";
    out << "jobs = " << jobs << "\n";
    out << "format = " << format << "\n";
    out << "warm.mode = " << warm_mode << "\n";
    out << "warm.m0 = " << warm_m0 << "\n";
    out << "warm.theta0 = " << format_double_list(theta0) << "\n";
    out << "estimator = " << estimator << "\n";
    out << "estimator.clamp = " << format_double(clamp) << "\n";
    out << "delay.enabled = " << (delay_enabled ? "true" : "false") << "\n";
    out << "delay.entry_mean = " << format_double(delay_entry_mean) << "\n";
    out << "delay.response_mean = " << format_double_list(delay_response_mean) << "\n";
    return out.str();
}

void SimulationConfig::validate() const {
    if (n < 1) throw ConfigError("config: n must be >= 1");
    if (reps < 1) throw ConfigError("config: reps must be >= 1");
    if (jobs < 1) throw ConfigError("config: jobs must be >= 1");
    if (format != "csv" && format != "json")
        throw ConfigError("config: format must be csv or json");
    if (warm_mode != "restricted-block" && warm_mode != "fixed-guess" &&
        warm_mode != "bayes-shrinkage")
        throw ConfigError("config: unknown warm.mode '" + warm_mode + "'");
    if (warm_m0 < 0) throw ConfigError("config: warm.m0 must be >= 0");
    if (estimator != "shrinkage" && estimator != "mle")
        throw ConfigError("config: estimator must be shrinkage or mle");
    if (bm_form != "symmetric" && bm_form != "as-printed")
        throw ConfigError("config: target.bm_form must be symmetric or as-printed");
    if (!(clamp >= 0.0 && clamp < 0.5))
        throw ConfigError("config: estimator.clamp must be in [0, 0.5)");
    if (delay_enabled && !(delay_entry_mean > 0.0))
        throw ConfigError("config: delay.entry_mean must be positive");
}

}  // namespace rar
