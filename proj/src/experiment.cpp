#include "hetnet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "hetnet/analytic.hpp"
#include "hetnet/errors.hpp"
#include "hetnet/geometric.hpp"
#include "hetnet/optimizer.hpp"

namespace hetnet::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail_field(const std::string& path, const std::string& why) {
    throw std::domain_error("config: field '" + path + "' " + why);
}

std::string join_path(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

const json& need(const json& obj, const std::string& parent, const char* key) {
    if (!obj.is_object()) fail_field(parent, "must be an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail_field(join_path(parent, key), "is missing");
    return *it;
}

double need_number(const json& obj, const std::string& parent, const char* key) {
    const json& v = need(obj, parent, key);
    if (!v.is_number()) fail_field(join_path(parent, key), "must be a number");
    return v.get<double>();
}

double number_or(const json& obj, const std::string& parent, const char* key,
                 double fallback) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail_field(join_path(parent, key), "must be a number");
    return v.get<double>();
}

std::uint64_t integer_or(const json& obj, const std::string& parent, const char* key,
                         std::uint64_t fallback) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        fail_field(join_path(parent, key), "must be an integer");
    return v.get<std::uint64_t>();
}

FadingModel parse_fading(const json& obj, const std::string& parent) {
    const json& kind = need(obj, parent, "kind");
    if (!kind.is_string()) fail_field(parent + ".kind", "must be a string");
    const std::string name = kind.get<std::string>();
    if (name == "exponential")
        return FadingModel::exponential(need_number(obj, parent, "mean"));
    if (name == "deterministic")
        return FadingModel::deterministic(need_number(obj, parent, "value"));
    if (name == "empirical") {
        const json& samples = need(obj, parent, "samples");
        if (!samples.is_array()) fail_field(parent + ".samples", "must be an array");
        std::vector<double> values;
        values.reserve(samples.size());
        for (const auto& s : samples) {
            if (!s.is_number()) fail_field(parent + ".samples", "must hold numbers");
            values.push_back(s.get<double>());
        }
        return FadingModel::empirical(std::move(values));
    }
    fail_field(parent + ".kind",
               "must be one of exponential, deterministic, empirical");
}

json fading_to_json(const FadingModel& fading) {
    json out;
    switch (fading.kind()) {
        case FadingModel::Kind::exponential:
            out["kind"] = "exponential";
            out["mean"] = fading.param();
            break;
        case FadingModel::Kind::deterministic:
            out["kind"] = "deterministic";
            out["value"] = fading.param();
            break;
        case FadingModel::Kind::empirical:
            out["kind"] = "empirical";
            out["samples"] = fading.samples();
            break;
    }
    return out;
}

LoadedConfig config_from_json(const json& root) {
    LoadedConfig out;
    const json& tiers = need(root, "", "tiers");
    if (!tiers.is_array() || tiers.empty())
        fail_field("tiers", "must be a nonempty array");
    for (std::size_t i = 0; i < tiers.size(); ++i) {
        const std::string path = "tiers[" + std::to_string(i) + "]";
        const json& t = tiers[i];
        TierParams tier;
        tier.lambda = need_number(t, path, "lambda");
        tier.p = need_number(t, path, "p");
        tier.alpha = need_number(t, path, "alpha");
        tier.P0 = need_number(t, path, "P0");
        tier.delta = need_number(t, path, "delta");
        tier.fading = t.contains("fading") ? parse_fading(t.at("fading"), path + ".fading")
                                           : FadingModel::exponential(1.0);
        out.network.tiers.push_back(std::move(tier));
    }

    if (root.contains("network")) {
        const json& net = root.at("network");
        out.network.P_bh = number_or(net, "network", "P_bh", 0.0);
        out.network.sigma2 = number_or(net, "network", "sigma2", 0.0);
        out.network.tau0 = number_or(net, "network", "tau0", 1.0);
    }

    if (root.contains("sim")) {
        const json& s = root.at("sim");
        out.sim.window_side = number_or(s, "sim", "window_side", out.sim.window_side);
        out.sim.realizations = static_cast<std::size_t>(
            integer_or(s, "sim", "realizations", out.sim.realizations));
        out.sim.seed = integer_or(s, "sim", "seed", out.sim.seed);
        out.sim.guard_radius = number_or(s, "sim", "guard_radius", out.sim.guard_radius);
        out.sim.n_threads = static_cast<unsigned>(
            integer_or(s, "sim", "n_threads", out.sim.n_threads));
        if (s.contains("laplace_t_samples")) {
            const json& probes = s.at("laplace_t_samples");
            if (!probes.is_array())
                fail_field("sim.laplace_t_samples", "must be an array");
            for (const auto& v : probes) {
                if (!v.is_number())
                    fail_field("sim.laplace_t_samples", "must hold numbers");
                out.sim.laplace_t_samples.push_back(v.get<double>());
            }
        }
    }

    if (root.contains("thresholds")) {
        const json& th = root.at("thresholds");
        const json& unit = need(th, "thresholds", "unit");
        if (!unit.is_string()) fail_field("thresholds.unit", "must be a string");
        const json& values = need(th, "thresholds", "values");
        if (!values.is_array()) fail_field("thresholds.values", "must be an array");
        std::vector<double> raw;
        raw.reserve(values.size());
        for (const auto& v : values) {
            if (!v.is_number()) fail_field("thresholds.values", "must hold numbers");
            raw.push_back(v.get<double>());
        }
        if (raw.size() != out.network.K())
            fail_field("thresholds.values", "must list one entry per tier");
        const std::string u = unit.get<std::string>();
        if (u == "watts")
            out.thresholds.T = std::move(raw);
        else if (u == "radius_m")
            out.thresholds = thresholds_from_radii(out.network, raw);
        else
            fail_field("thresholds.unit", "must be 'watts' or 'radius_m'");
    }

    out.network.validate();
    out.sim.validate();
    if (!out.thresholds.T.empty()) out.thresholds.validate(out.network.K());
    return out;
}

json config_to_json(const LoadedConfig& cfg) {
    json root;
    root["tiers"] = json::array();
    for (const auto& tier : cfg.network.tiers) {
        json t;
        t["lambda"] = tier.lambda;
        t["p"] = tier.p;
        t["alpha"] = tier.alpha;
        t["P0"] = tier.P0;
        t["delta"] = tier.delta;
        t["fading"] = fading_to_json(tier.fading);
        root["tiers"].push_back(std::move(t));
    }
    root["network"] = {{"P_bh", cfg.network.P_bh},
                       {"sigma2", cfg.network.sigma2},
                       {"tau0", cfg.network.tau0}};
    root["sim"] = {{"window_side", cfg.sim.window_side},
                   {"realizations", cfg.sim.realizations},
                   {"seed", cfg.sim.seed},
                   {"guard_radius", cfg.sim.guard_radius},
                   {"n_threads", cfg.sim.n_threads}};
    if (!cfg.sim.laplace_t_samples.empty())
        root["sim"]["laplace_t_samples"] = cfg.sim.laplace_t_samples;
    if (!cfg.thresholds.T.empty())
        root["thresholds"] = {{"unit", "watts"}, {"values", cfg.thresholds.T}};
    return root;
}

// ---- output table ----------------------------------------------------------

using Row = std::vector<std::pair<std::string, double>>;

std::string format_cell(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

class TableWriter {
public:
    TableWriter(std::ostream& os, bool as_json) : os_(os), as_json_(as_json) {}

    ~TableWriter() { finish(); }

    void row(const Row& cells) {
        for (const auto& [name, value] : cells)
            if (!std::isfinite(value))
                throw numeric_error("output column '" + name + "' is not finite");
        if (as_json_) {
            if (first_) os_ << "[\n";
            ordered_json o;
            for (const auto& [name, value] : cells) o[name] = value;
            os_ << (first_ ? "" : ",\n") << "  " << o.dump();
        } else {
            if (first_) {
                for (std::size_t i = 0; i < cells.size(); ++i)
                    os_ << (i ? "," : "") << cells[i].first;
                os_ << "\n";
            }
            for (std::size_t i = 0; i < cells.size(); ++i)
                os_ << (i ? "," : "") << format_cell(cells[i].second);
            os_ << "\n";
        }
        first_ = false;
        os_.flush();
    }

    void finish() {
        if (done_) return;
        done_ = true;
        if (as_json_) os_ << (first_ ? "[]\n" : "\n]\n");
        os_.flush();
    }

private:
    std::ostream& os_;
    bool as_json_;
    bool first_ = true;
    bool done_ = false;
};

// ---- sweep axes ------------------------------------------------------------

struct AxisRef {
    enum class Target {
        tau0,
        sigma2,
        backhaul,
        window_side,
        tier_lambda,
        tier_p,
        tier_alpha,
        tier_P0,
        tier_delta,
        tier_fading,
        threshold_watts,
        threshold_radius,
    };
    Target target;
    std::size_t tier = 0;  // 0-based where applicable

    bool is_threshold() const {
        return target == Target::threshold_watts || target == Target::threshold_radius;
    }
};

std::size_t parse_tier_index(const std::string& text, const std::string& axis,
                             std::size_t K) {
    std::size_t idx = 0;
    try {
        idx = std::stoul(text);
    } catch (const std::exception&) {
        throw std::domain_error("sweep axis '" + axis + "' has a malformed tier index");
    }
    if (idx < 1 || idx > K)
        throw std::domain_error("sweep axis '" + axis + "' references tier " + text +
                                " but the config has " + std::to_string(K) + " tier(s)");
    return idx - 1;
}

AxisRef parse_axis_name(const std::string& name, std::size_t K) {
    using Target = AxisRef::Target;
    if (name == "tau0") return {Target::tau0};
    if (name == "sigma2") return {Target::sigma2};
    if (name == "P_bh") return {Target::backhaul};
    if (name == "window_side") return {Target::window_side};
    if (name.rfind("tier", 0) == 0) {
        const auto dot = name.find('.');
        if (dot == std::string::npos || dot <= 4)
            throw std::domain_error("sweep axis '" + name +
                                    "' must look like tier<index>.<field>");
        const std::size_t tier = parse_tier_index(name.substr(4, dot - 4), name, K);
        const std::string field = name.substr(dot + 1);
        if (field == "lambda") return {Target::tier_lambda, tier};
        if (field == "p") return {Target::tier_p, tier};
        if (field == "alpha") return {Target::tier_alpha, tier};
        if (field == "P0") return {Target::tier_P0, tier};
        if (field == "delta") return {Target::tier_delta, tier};
        if (field == "fading_mean") return {Target::tier_fading, tier};
        throw std::domain_error("sweep axis '" + name + "' names unknown field '" +
                                field + "'");
    }
    if (name.size() >= 2 && (name[0] == 'T' || name[0] == 'R')) {
        const std::size_t tier = parse_tier_index(name.substr(1), name, K);
        return {name[0] == 'T' ? Target::threshold_watts : Target::threshold_radius,
                tier};
    }
    throw std::domain_error("unknown sweep axis '" + name + "'");
}

void apply_axis(LoadedConfig& cfg, const AxisRef& ref, double value) {
    using Target = AxisRef::Target;
    switch (ref.target) {
        case Target::tau0:
            cfg.network.tau0 = value;
            return;
        case Target::sigma2:
            cfg.network.sigma2 = value;
            return;
        case Target::backhaul:
            cfg.network.P_bh = value;
            return;
        case Target::window_side:
            cfg.sim.window_side = value;
            return;
        case Target::tier_lambda:
            cfg.network.tiers[ref.tier].lambda = value;
            return;
        case Target::tier_p:
            cfg.network.tiers[ref.tier].p = value;
            return;
        case Target::tier_alpha:
            cfg.network.tiers[ref.tier].alpha = value;
            return;
        case Target::tier_P0:
            cfg.network.tiers[ref.tier].P0 = value;
            return;
        case Target::tier_delta:
            cfg.network.tiers[ref.tier].delta = value;
            return;
        case Target::tier_fading: {
            auto& fading = cfg.network.tiers[ref.tier].fading;
            if (fading.kind() == FadingModel::Kind::exponential)
                fading = FadingModel::exponential(value);
            else if (fading.kind() == FadingModel::Kind::deterministic)
                fading = FadingModel::deterministic(value);
            else
                throw std::domain_error(
                    "cannot sweep the fading mean of an empirical fading model");
            return;
        }
        case Target::threshold_watts:
        case Target::threshold_radius: {
            if (cfg.thresholds.T.size() != cfg.network.K())
                throw std::domain_error(
                    "config must provide thresholds before they can be swept");
            cfg.thresholds.T[ref.tier] =
                ref.target == Target::threshold_watts
                    ? value
                    : threshold_from_radius(cfg.network.tiers[ref.tier], value);
            return;
        }
    }
}

struct Grid {
    std::vector<AxisRef> refs;
    std::vector<std::vector<double>> values;  // per axis
    std::vector<std::string> names;

    std::size_t points() const {
        std::size_t n = 1;
        for (const auto& v : values) n *= v.size();
        return n;
    }
};

Grid build_grid(const ExperimentSpec& spec, std::size_t K) {
    Grid grid;
    for (const auto& axis : spec.sweeps) {
        if (axis.steps < 2)
            throw std::domain_error("sweep axis '" + axis.name +
                                    "' needs at least two steps");
        if (!std::isfinite(axis.min) || !std::isfinite(axis.max))
            throw std::domain_error("sweep axis '" + axis.name +
                                    "' has non-finite bounds");
        grid.refs.push_back(parse_axis_name(axis.name, K));
        grid.names.push_back(axis.name);
        std::vector<double> vals(axis.steps);
        for (int j = 0; j < axis.steps; ++j)
            vals[j] = axis.min + (axis.max - axis.min) * j / (axis.steps - 1);
        grid.values.push_back(std::move(vals));
    }
    return grid;
}

// Applies one grid point; thresholds last so radius conversions see the swept
// tier parameters.
LoadedConfig at_point(const LoadedConfig& base, const Grid& grid,
                      const std::vector<std::size_t>& index) {
    LoadedConfig cfg = base;
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t a = 0; a < grid.refs.size(); ++a)
            if (grid.refs[a].is_threshold() == (pass == 1))
                apply_axis(cfg, grid.refs[a], grid.values[a][index[a]]);
    cfg.network.validate();
    return cfg;
}

double to_db(double watts) { return 10.0 * std::log10(watts); }

void require_thresholds(const LoadedConfig& cfg) {
    if (cfg.thresholds.T.size() != cfg.network.K())
        throw std::domain_error(
            "this command needs per-tier thresholds in the config");
    cfg.thresholds.validate(cfg.network.K());
}

NetworkConfig without_noise(const NetworkConfig& net) {
    NetworkConfig out = net;
    out.sigma2 = 0.0;
    return out;
}

void append_thresholds(Row& row, const NetworkConfig& net,
                       const ThresholdVector& thresholds) {
    for (std::size_t k = 0; k < thresholds.T.size(); ++k)
        row.emplace_back("T" + std::to_string(k + 1), thresholds.T[k]);
    const auto radii = radii_from_thresholds(net, thresholds);
    for (std::size_t k = 0; k < radii.size(); ++k)
        row.emplace_back("R" + std::to_string(k + 1), radii[k]);
}

// ---- commands --------------------------------------------------------------

void cmd_rate(const ExperimentSpec&, const LoadedConfig& cfg, Row& row) {
    require_thresholds(cfg);
    append_thresholds(row, cfg.network, cfg.thresholds);
    row.emplace_back("tau", analytic::spatial_average_rate(cfg.network, cfg.thresholds));
}

void cmd_ee(const ExperimentSpec&, const LoadedConfig& cfg, Row& row) {
    require_thresholds(cfg);
    append_thresholds(row, cfg.network, cfg.thresholds);
    const double tau = analytic::spatial_average_rate(cfg.network, cfg.thresholds);
    const double power = analytic::cluster_power(cfg.network, cfg.thresholds);
    row.emplace_back("tau", tau);
    row.emplace_back("P_cl", power);
    row.emplace_back("EE", tau / power);
}

void cmd_cluster_stats(const ExperimentSpec&, const LoadedConfig& cfg, Row& row) {
    require_thresholds(cfg);
    append_thresholds(row, cfg.network, cfg.thresholds);
    for (std::size_t k = 0; k < cfg.network.K(); ++k)
        row.emplace_back(
            "N" + std::to_string(k + 1),
            analytic::mean_cluster_size(cfg.network.tiers[k], cfg.thresholds.T[k]));
    row.emplace_back("P_cl", analytic::cluster_power(cfg.network, cfg.thresholds));
}

void cmd_optimize(const ExperimentSpec& spec, const LoadedConfig& cfg, Row& row) {
    const auto opt = spec.exact
                         ? optimizer::optimal_thresholds_exact(cfg.network, spec.tolerance)
                         : optimizer::optimal_thresholds(cfg.network);
    append_thresholds(row, cfg.network, opt.thresholds);
    for (std::size_t k = 0; k < opt.thresholds.T.size(); ++k)
        row.emplace_back("T" + std::to_string(k + 1) + "_dB",
                         to_db(opt.thresholds.T[k]));
    row.emplace_back("rate_bound", opt.achieved_rate_lower_bound);
    row.emplace_back("rate", analytic::spatial_average_rate(without_noise(cfg.network),
                                                            opt.thresholds));
    row.emplace_back("P_cl", analytic::cluster_power(cfg.network, opt.thresholds));
    row.emplace_back("residual", opt.residual);
}

void cmd_lower_bound(const ExperimentSpec& spec, const LoadedConfig& cfg, Row& row) {
    const std::size_t K = cfg.network.K();
    if (K < 2)
        throw std::domain_error("lower-bound needs at least two tiers");
    require_thresholds(cfg);
    const std::vector<double> pinned(cfg.thresholds.T.begin(),
                                     cfg.thresholds.T.end() - 1);
    for (std::size_t k = 0; k + 1 < K; ++k)
        row.emplace_back("T" + std::to_string(k + 1), pinned[k]);

    const std::string last = "T" + std::to_string(K);
    row.emplace_back("tau0_ceiling", optimizer::tau0_max(cfg.network, pinned));
    const double floor = optimizer::threshold_lower_bound(cfg.network, pinned);
    row.emplace_back(last + "_lb", floor);
    row.emplace_back(last + "_lb_dB", to_db(floor));
    const double exact =
        optimizer::threshold_exact(cfg.network, pinned, spec.tolerance);
    row.emplace_back(last + "_exact", exact);
    row.emplace_back(last + "_exact_dB", to_db(exact));
    row.emplace_back("gap_dB", to_db(exact) - to_db(floor));
    if (K == 2) {
        const double taylor =
            optimizer::threshold_lower_bound_two_tier_closed(cfg.network, pinned[0], 2);
        row.emplace_back(last + "_taylor", taylor);
        row.emplace_back(last + "_taylor_dB", to_db(taylor));
        row.emplace_back("taylor_gap_dB", to_db(taylor) - to_db(floor));
    }
}

void cmd_compare_geometric(const ExperimentSpec& spec, const LoadedConfig& cfg,
                           Row& row) {
    const auto rss = spec.exact
                         ? optimizer::optimal_thresholds_exact(cfg.network, spec.tolerance)
                         : optimizer::optimal_thresholds(cfg.network);
    const double P_rss = analytic::cluster_power(cfg.network, rss.thresholds);
    const auto geo = geometric::optimal_radii(cfg.network);
    row.emplace_back("P_cl_rss", P_rss);
    row.emplace_back("P_cl_geometric", geo.P_cl_tilde);
    row.emplace_back("saving_pct", (geo.P_cl_tilde - P_rss) / geo.P_cl_tilde * 100.0);
    for (std::size_t k = 0; k < cfg.network.K(); ++k)
        row.emplace_back("R" + std::to_string(k + 1) + "_geo", geo.R_star[k]);
    append_thresholds(row, cfg.network, rss.thresholds);
}

void cmd_compare_macro_only(const ExperimentSpec& spec, const LoadedConfig& cfg,
                            Row& row) {
    const auto optimum = [&](const NetworkConfig& net) {
        return spec.exact ? optimizer::optimal_thresholds_exact(net, spec.tolerance)
                          : optimizer::optimal_thresholds(net);
    };
    const auto full = optimum(cfg.network);
    const double P_full = analytic::cluster_power(cfg.network, full.thresholds);

    NetworkConfig macro = cfg.network;
    macro.tiers.resize(1);
    const auto solo = optimum(macro);
    const double P_macro = analytic::cluster_power(macro, solo.thresholds);

    row.emplace_back("P_cl_hetnet", P_full);
    row.emplace_back("P_cl_macro_only", P_macro);
    row.emplace_back("saving_pct", (P_macro - P_full) / P_macro * 100.0);
    row.emplace_back("T1_macro_only", solo.thresholds.T[0]);
}

void cmd_montecarlo(const ExperimentSpec&, const LoadedConfig& cfg, Row& row) {
    require_thresholds(cfg);
    append_thresholds(row, cfg.network, cfg.thresholds);
    const auto outcome = sim::run(cfg.network, cfg.sim, cfg.thresholds);
    row.emplace_back("tau_mc", outcome.tau_hat);
    row.emplace_back("tau_mc_se", outcome.tau_stderr);
    row.emplace_back("tau_analytic",
                     analytic::spatial_average_rate(cfg.network, cfg.thresholds));
    for (std::size_t k = 0; k < cfg.network.K(); ++k) {
        const std::string n = std::to_string(k + 1);
        row.emplace_back("N" + n + "_mc", outcome.cluster_size_hat[k]);
        row.emplace_back("N" + n + "_mc_se", outcome.cluster_size_stderr[k]);
        row.emplace_back(
            "N" + n,
            analytic::mean_cluster_size(cfg.network.tiers[k], cfg.thresholds.T[k]));
    }
    row.emplace_back("P_cl_mc", outcome.power_hat);
    row.emplace_back("P_cl_mc_se", outcome.power_stderr);
    row.emplace_back("P_cl", analytic::cluster_power(cfg.network, cfg.thresholds));
}

using CommandFn = void (*)(const ExperimentSpec&, const LoadedConfig&, Row&);

CommandFn find_command(const std::string& name) {
    if (name == "rate") return cmd_rate;
    if (name == "ee" || name == "sweep") return cmd_ee;
    if (name == "cluster-stats") return cmd_cluster_stats;
    if (name == "optimize") return cmd_optimize;
    if (name == "lower-bound") return cmd_lower_bound;
    if (name == "compare-geometric") return cmd_compare_geometric;
    if (name == "compare-macro-only") return cmd_compare_macro_only;
    if (name == "montecarlo") return cmd_montecarlo;
    throw std::domain_error("unknown command '" + name + "'");
}

}  // namespace

const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> names = {
        "rate",          "ee",
        "cluster-stats", "optimize",
        "lower-bound",   "compare-geometric",
        "compare-macro-only", "montecarlo",
        "sweep"};
    return names;
}

LoadedConfig default_config() {
    LoadedConfig cfg;
    TierParams macro;
    macro.lambda = 1.0 / (250.0 * 250.0 * std::numbers::pi);
    macro.p = 20.0;
    macro.alpha = 4.3;
    macro.P0 = 130.0;
    macro.delta = 4.7;
    macro.fading = FadingModel::exponential(1.0);
    TierParams pico;
    pico.lambda = 1.0 / (50.0 * 50.0 * std::numbers::pi);
    pico.p = 0.13;
    pico.alpha = 3.8;
    pico.P0 = 6.8;
    pico.delta = 4.0;
    pico.fading = FadingModel::exponential(1.0);
    cfg.network.tiers = {macro, pico};
    cfg.network.P_bh = 5.0;
    cfg.network.sigma2 = 0.0;
    cfg.network.tau0 = 3.5;
    cfg.thresholds = thresholds_from_radii(cfg.network, {500.0, 150.0});
    return cfg;
}

LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("config: cannot open '" + path + "'");
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::domain_error("config: '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(root);
}

void save_config(const LoadedConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::domain_error("config: cannot write '" + path + "'");
    out << config_to_json(cfg).dump(2) << "\n";
}

int run_experiment(const ExperimentSpec& spec) {
    try {
        if (spec.format != "csv" && spec.format != "json")
            throw std::domain_error("format must be 'csv' or 'json'");
        if (!std::isfinite(spec.tolerance) || spec.tolerance <= 0.0)
            throw std::domain_error("tolerance must be positive");
        const CommandFn command = find_command(spec.command);
        if (spec.command == "sweep" && spec.sweeps.empty())
            throw std::domain_error("the sweep command needs at least one --sweep axis");

        LoadedConfig base =
            spec.config_path.empty() ? default_config() : load_config(spec.config_path);
        if (spec.seed) base.sim.seed = *spec.seed;
        if (spec.threads) base.sim.n_threads = *spec.threads;

        std::ofstream file;
        std::ostream* os = &std::cout;
        if (!spec.output_path.empty()) {
            file.open(spec.output_path);
            if (!file)
                throw std::domain_error("cannot write output file '" +
                                        spec.output_path + "'");
            os = &file;
        }

        const Grid grid = build_grid(spec, base.network.K());
        TableWriter writer(*os, spec.format == "json");
        std::vector<std::size_t> index(grid.refs.size(), 0);
        const std::size_t total = grid.points();
        for (std::size_t point = 0; point < total; ++point) {
            const LoadedConfig cfg = at_point(base, grid, index);
            Row row;
            for (std::size_t a = 0; a < grid.refs.size(); ++a)
                row.emplace_back(grid.names[a], grid.values[a][index[a]]);
            command(spec, cfg, row);
            writer.row(row);
            for (std::size_t a = grid.refs.size(); a-- > 0;) {
                if (++index[a] < grid.values[a].size()) break;
                index[a] = 0;
            }
        }
        writer.finish();
        return exit_ok;
    } catch (const infeasible_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_infeasible;
    } catch (const numerics::convergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    }
}

}  // namespace hetnet::cli
