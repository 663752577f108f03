#pragma once

#include <chrono>
#include <string>
#include <thread>
#include <vector>

#include "perc/bounds.hpp"
#include "perc/config.hpp"
#include "perc/engine.hpp"
#include "perc/io.hpp"
#include "perc/models.hpp"
#include "perc/version.hpp"

namespace perc {

// Outcome of executing a RunPlan. `meta` (and `bounds`, for the bounds
// action) hold only deterministic content — wall time and thread count stay
// out of the serialized sidecars so that (config, seed) yields bit-identical
// files regardless of machine or parallelism.
struct RunRecord {
    std::vector<ResultRow> rows;
    nlohmann::json meta;
    nlohmann::json bounds;
    double wall_seconds = 0.0;
    std::string csv_path, meta_path, bounds_path;
};

namespace detail {

inline std::pair<const char*, double> natural_axis(const ModelParams& mp) {
    if (model_is_lattice(mp.kind)) return {"p", mp.p};
    return {"lambda", mp.lambda};
}

inline ResultRow make_row(const RunPlan& plan, const char* axis, double axis_value,
                          const EstimateResult& est) {
    ResultRow row;
    row.model = model_name(plan.params.kind);
    row.axis = axis;
    row.axis_value = axis_value;
    row.estimate = est.estimate;
    row.std_error = est.std_error;
    row.reps = est.reps;
    row.seed = plan.seed;
    row.config_hash = hash_hex(plan.config_hash);
    return row;
}

// deterministic derived stream for the Cox normalization pass (distinct from
// every per-replication stream, which uses the plan seed directly)
inline constexpr std::uint64_t normalize_salt = 0x636e6f726dULL; // "cnorm"

inline void add_model_notes(const RunPlan& plan, nlohmann::json& meta) {
    const ModelParams& mp = plan.params;
    nlohmann::json notes = nlohmann::json::array();
    if (mp.kind == ModelKind::SinrRandom) {
        const double cutoff = mp.sinr.tau * mp.sinr.N0 / mp.ell.at_zero();
        const double dead = 1.0 - mp.marks.tail(cutoff);
        if (dead > 0.0)
            notes.push_back("sinr_random: fraction " + format_g17(dead) +
                            " of points transmit below the noise floor and can never link");
    }
    if (mp.kind == ModelKind::SinrConst && mp.ell.kind == PathLossKind::CompactSupport) {
        const double rb = snr_radius(mp.ell, mp.sinr.P, mp.sinr.N0, mp.sinr.tau);
        if (rb >= mp.ell.r_max)
            notes.push_back("sinr_const: noise-only radius limited by the path-loss support "
                            "r_max = " +
                            format_g17(mp.ell.r_max));
    }
    if ((mp.kind == ModelKind::SinrConst || mp.kind == ModelKind::SinrRandom) &&
        mp.sinr.gamma > 0.0) {
        const double bias = truncation_bias(mp.ell, mp.lambda, mp.window.padding);
        notes.push_back("sinr: mean interference ignored beyond the padding = " +
                        format_g17(bias));
    }
    if (!notes.empty()) meta["notes"] = notes;
}

inline nlohmann::json estimate_json(const EstimateResult& e) {
    return {{"estimate", e.estimate}, {"stderr", e.std_error}, {"reps", e.reps}};
}

} // namespace detail

// Closed-form quantities for the configured parameters, each evaluated
// independently: an infeasible entry records its error message without
// blocking the others.
inline nlohmann::json report_bounds(const RunPlan& plan) {
    nlohmann::json out;
    const ModelParams& mp = plan.params;

    auto [hex_lo, hex_hi] = hexagon_threshold_interval();
    out["hexagon_interval"] = {{"lower", hex_lo}, {"upper", hex_hi}};

    try {
        BranchingBound b = branching_subcritical_bound(mp.marks, mp.window.d);
        out["branching"] = {{"lambda0", b.lambda0}, {"C", b.C}, {"moment", b.moment}};
    } catch (const std::exception& e) {
        out["branching"] = {{"error", e.what()}};
    }

    nlohmann::json inter;
    try {
        K0Result k0 = interference_k0(mp.ell, plan.bounds_n);
        inter["K0"] = k0.K0;
        inter["tail_fraction"] = k0.tail_fraction;
    } catch (const std::exception& e) {
        inter["K0_error"] = e.what();
    }
    try {
        inter["r_B"] = mp.ell.exceed_radius(plan.ipar.tau * plan.ipar.N0 / plan.ipar.P);
    } catch (const std::exception& e) {
        inter["r_B_error"] = e.what();
    }
    try {
        inter["gamma_prime"] = gamma_prime_bound(mp.ell, plan.ipar.N0, plan.ipar.tau, plan.ipar.P,
                                                 plan.ipar.M, plan.ipar.r);
    } catch (const std::exception& e) {
        inter["gamma_prime_error"] = e.what();
    }
    try {
        inter["delta"] = delta_half_distance(mp.ell, plan.ipar.N0, plan.ipar.tau, plan.ipar.r);
        inter["gamma_star"] =
            gamma_star_bound(mp.ell, plan.ipar.N0, plan.ipar.tau, plan.ipar.M, plan.ipar.r);
    } catch (const std::exception& e) {
        inter["gamma_star_error"] = e.what();
    }
    out["interference"] = inter;

    ThetaMomentCheck tm =
        theta_moment_check(mp.ell, mp.marks, mp.window.d, mp.sinr.tau, mp.sinr.N0);
    out["theta_moment"] = {{"value", tm.value},
                           {"finite", tm.finite},
                           {"alpha_beta_ok", tm.alpha_beta_ok},
                           {"note", tm.note}};
    return out;
}

// human-readable table of a bounds report
inline std::string format_bounds(const nlohmann::json& b) {
    std::string s;
    auto line = [&s](const std::string& k, const nlohmann::json& v) {
        s += "  ";
        s += k;
        s += ": ";
        s += v.is_string() ? v.get<std::string>() : v.dump();
        s += '\n';
    };
    s += "hexagon coarse-grain critical interval:\n";
    line("lower", b["hexagon_interval"]["lower"]);
    line("upper", b["hexagon_interval"]["upper"]);
    s += "branching subcritical bound:\n";
    for (auto it = b["branching"].begin(); it != b["branching"].end(); ++it)
        line(it.key(), it.value());
    s += "interference constants:\n";
    for (auto it = b["interference"].begin(); it != b["interference"].end(); ++it)
        line(it.key(), it.value());
    s += "power-mark moment check:\n";
    for (auto it = b["theta_moment"].begin(); it != b["theta_moment"].end(); ++it)
        line(it.key(), it.value());
    return s;
}

inline RunRecord run_plan(RunPlan plan) {
    if (!plan.seed_set)
        throw std::invalid_argument(
            "config.seed: required (explicit seeding; no wall-clock default)");
    const auto t0 = std::chrono::steady_clock::now();
    int threads = plan.threads > 0
                      ? plan.threads
                      : std::max(1u, std::thread::hardware_concurrency());

    RunRecord rec;
    rec.meta["version"] = version_string;
    rec.meta["action"] = action_name(plan.action);
    rec.meta["model"] = model_name(plan.params.kind);
    rec.meta["seed"] = plan.seed;
    rec.meta["reps"] = plan.reps;
    rec.meta["config_hash"] = hash_hex(plan.config_hash);
    rec.meta["config"] = plan.raw;

    if (plan.action != RunAction::Bounds) {
        prepare_model(plan.params);  // idempotent; covers plans whose action changed after parsing
        if (plan.params.kind == ModelKind::CoxGilbert && plan.normalize) {
            RngStream norm_rng(RngStream::mix(plan.seed, detail::normalize_salt), 0);
            NormalizationResult nr =
                normalize_environment(plan.params.env, plan.normalize_reps, norm_rng);
            plan.params.env.c_norm = nr.c_norm;
            rec.meta["c_norm"] = {{"value", nr.c_norm},
                                  {"stderr", nr.std_error},
                                  {"mean_length", nr.mean_length},
                                  {"reps", nr.reps}};
        }
        rec.meta["resolved"] = {{"padding", plan.params.window.padding},
                                {"margin", plan.params.margin},
                                {"c_norm", plan.params.env.c_norm}};
        detail::add_model_notes(plan, rec.meta);
    }

    const ModelParams params = plan.params;
    switch (plan.action) {
    case RunAction::Run: {
        auto trial = [&params](RngStream& rng) { return crossing_replication(params, rng); };
        EstimateResult est = estimate_probability(trial, plan.seed, plan.reps, threads);
        auto [axis, value] = detail::natural_axis(params);
        rec.rows.push_back(detail::make_row(plan, axis, value, est));
        rec.meta["result"] = detail::estimate_json(est);
        break;
    }
    case RunAction::Sweep: {
        const SweepAxis axis = plan.axis;
        auto trial = [&params, axis](double x, RngStream& rng) {
            ModelParams mp = with_axis_value(params, axis, x);
            return crossing_replication(mp, rng);
        };
        SweepResult sw = sweep_grid(trial, plan.grid, plan.seed, plan.reps, threads);
        for (const SweepPoint& pt : sw.points)
            rec.rows.push_back(detail::make_row(plan, axis_name(axis), pt.x, pt.result));
        nlohmann::json sj;
        sj["any_positive"] = sw.any_positive;
        sj["largest_positive"] = sw.any_positive ? sw.largest_positive : 0.0;
        if (axis == SweepAxis::Gamma) sj["gamma_star_hat"] = sw.any_positive ? sw.largest_positive : 0.0;
        rec.meta["sweep"] = sj;
        break;
    }
    case RunAction::Critical: {
        const SweepAxis axis = plan.axis;
        auto trial = [&params, axis](double x, RngStream& rng) {
            ModelParams mp = with_axis_value(params, axis, x);
            return crossing_replication(mp, rng);
        };
        CriticalResult cr = find_critical(trial, plan.bracket_lo, plan.bracket_hi, plan.target,
                                          plan.tolerance, plan.seed, plan.reps, threads);
        for (const ProbePoint& pt : cr.trace)
            rec.rows.push_back(detail::make_row(plan, axis_name(axis), pt.x, pt.result));
        rec.meta["critical"] = {{"lower", cr.lower},
                                {"upper", cr.upper},
                                {"estimate", cr.estimate},
                                {"increasing", cr.increasing},
                                {"monotone_warning", cr.monotone_warning},
                                {"axis", axis_name(axis)},
                                {"target", plan.target},
                                {"tolerance", plan.tolerance}};
        break;
    }
    case RunAction::Bounds: {
        rec.bounds = report_bounds(plan);
        break;
    }
    }

    if (!plan.out_dir.empty()) {
        const std::string base = plan.out_dir + "/";
        if (plan.action == RunAction::Bounds) {
            rec.bounds_path = base + "bounds.json";
            write_text_file(rec.bounds_path, rec.bounds.dump(2) + "\n");
        } else {
            rec.csv_path = base + "results.csv";
            write_results_csv(rec.csv_path, rec.rows);
        }
        rec.meta_path = base + "meta.json";
        write_text_file(rec.meta_path, rec.meta.dump(2) + "\n");
    }
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

} // namespace perc
