#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "perc/bounds.hpp"
#include "perc/models.hpp"

namespace perc {

enum class RunAction { Run, Sweep, Critical, Bounds };

inline const char* action_name(RunAction a) {
    switch (a) {
    case RunAction::Run: return "run";
    case RunAction::Sweep: return "sweep";
    case RunAction::Critical: return "critical";
    case RunAction::Bounds: return "bounds";
    }
    return "?";
}

// Fully parsed experiment description: the model parameters plus what to do
// with them and how to seed/replicate/emit.
struct RunPlan {
    RunAction action = RunAction::Run;
    ModelParams params{};
    SweepAxis axis = SweepAxis::Lambda;
    std::vector<double> grid;                     // sweep
    double bracket_lo = 0.0, bracket_hi = 1.0;    // bisection
    double target = 0.5;
    double tolerance = 0.05;
    long long reps = 1000;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0; // 0: use all available cores
    std::string out_dir;
    bool normalize = false;       // Cox: calibrate c_norm before running
    long long normalize_reps = 200;
    long long bounds_n = 1;       // renormalization scale for the lattice-sum constant
    InterferenceParams ipar{};
    nlohmann::json raw;
    std::uint64_t config_hash = 0;
};

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return s;
}

namespace cfg {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
    throw std::invalid_argument(path + ": " + msg);
}

inline void check_keys(const json& obj, const std::string& path,
                       std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) fail(path + "." + it.key(), "unknown field");
    }
}

inline const json* find(const json& obj, const char* key) {
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

inline double number(const json& obj, const std::string& path, const char* key,
                     std::optional<double> fallback = std::nullopt) {
    const json* v = find(obj, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(path + "." + key, "required number missing");
    }
    if (!v->is_number()) fail(path + "." + key, "must be a number");
    return v->get<double>();
}

inline long long integer(const json& obj, const std::string& path, const char* key,
                         std::optional<long long> fallback = std::nullopt) {
    const json* v = find(obj, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(path + "." + key, "required integer missing");
    }
    if (!v->is_number_integer()) fail(path + "." + key, "must be an integer");
    return v->get<long long>();
}

inline std::string text(const json& obj, const std::string& path, const char* key,
                        std::optional<std::string> fallback = std::nullopt) {
    const json* v = find(obj, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(path + "." + key, "required string missing");
    }
    if (!v->is_string()) fail(path + "." + key, "must be a string");
    return v->get<std::string>();
}

inline std::vector<double> number_list(const json& obj, const std::string& path, const char* key) {
    const json* v = find(obj, key);
    if (!v) fail(path + "." + key, "required array missing");
    if (!v->is_array()) fail(path + "." + key, "must be an array of numbers");
    std::vector<double> out;
    for (const json& e : *v) {
        if (!e.is_number()) fail(path + "." + key, "must be an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

inline MarkDistribution parse_marks(const json& obj, const std::string& path) {
    check_keys(obj, path, {"kind", "value", "lo", "hi", "p_lo", "alpha", "rstar", "q"});
    const std::string kind = text(obj, path, "kind");
    try {
        if (kind == "constant") return MarkDistribution::constant(number(obj, path, "value"));
        if (kind == "uniform")
            return MarkDistribution::uniform(number(obj, path, "lo"), number(obj, path, "hi"));
        if (kind == "pareto") {
            const double alpha = number(obj, path, "alpha");
            const double rstar = number(obj, path, "rstar", 1.0);
            return MarkDistribution::pareto_tail(alpha, rstar);
        }
        if (kind == "two_point") {
            const double lo = number(obj, path, "lo");
            const double hi = number(obj, path, "hi");
            const double p_lo = number(obj, path, "p_lo");
            return MarkDistribution::two_point(lo, p_lo, hi, 1.0 - p_lo);
        }
        if (kind == "geometric") return MarkDistribution::geometric_like(number(obj, path, "q"));
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    fail(path + ".kind", "unknown mark distribution '" + kind + "'");
}

inline PathLoss parse_path_loss(const json& obj, const std::string& path, int d) {
    check_keys(obj, path, {"kind", "p", "r_max", "r", "v"});
    const std::string kind = text(obj, path, "kind");
    try {
        if (kind == "power_law_one_plus") return PathLoss::power_law_one_plus(number(obj, path, "p"), d);
        if (kind == "min_power_law") return PathLoss::min_power_law(number(obj, path, "p"), d);
        if (kind == "compact")
            return PathLoss::compact_support(number(obj, path, "p"), number(obj, path, "r_max"), d);
        if (kind == "table")
            return PathLoss::table(number_list(obj, path, "r"), number_list(obj, path, "v"), d);
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    fail(path + ".kind", "unknown path loss '" + kind + "'");
}

inline RenewalLaw parse_renewal(const json& obj, const std::string& path) {
    check_keys(obj, path, {"kind", "gap", "mean", "lo", "hi"});
    const std::string kind = text(obj, path, "kind");
    try {
        if (kind == "deterministic") return RenewalLaw::deterministic(number(obj, path, "gap"));
        if (kind == "exponential") return RenewalLaw::exponential(number(obj, path, "mean"));
        if (kind == "uniform")
            return RenewalLaw::uniform(number(obj, path, "lo"), number(obj, path, "hi"));
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    fail(path + ".kind", "unknown renewal law '" + kind + "'");
}

inline SweepAxis parse_axis(const std::string& s, const std::string& path) {
    if (s == "lambda") return SweepAxis::Lambda;
    if (s == "gamma") return SweepAxis::Gamma;
    if (s == "p") return SweepAxis::P;
    fail(path, "unknown axis '" + s + "' (expected lambda, gamma or p)");
}

inline ModelKind parse_model(const std::string& s, const std::string& path) {
    if (s == "gilbert") return ModelKind::Gilbert;
    if (s == "boolean_overlap") return ModelKind::BooleanOverlap;
    if (s == "boolean_min") return ModelKind::BooleanMin;
    if (s == "sinr_const") return ModelKind::SinrConst;
    if (s == "sinr_random") return ModelKind::SinrRandom;
    if (s == "bond") return ModelKind::Bond;
    if (s == "tri_site") return ModelKind::TriSite;
    if (s == "hex_coarse") return ModelKind::HexCoarse;
    if (s == "cox_gilbert") return ModelKind::CoxGilbert;
    fail(path, "unknown model '" + s + "'");
}

} // namespace cfg

// forced_action lets a CLI subcommand pin the action before the model is
// validated (a bounds report skips model preparation entirely, so a config
// that is infeasible as a simulation can still have its bounds evaluated).
inline RunPlan parse_config_json(const nlohmann::json& j,
                                 std::optional<RunAction> forced_action = std::nullopt) {
    using cfg::fail;
    const std::string P = "config";
    if (!j.is_object()) fail(P, "top level must be a JSON object");
    cfg::check_keys(j, P,
                    {"model", "action", "window", "lambda", "r", "marks", "path_loss", "sinr",
                     "environment", "hex_side", "lat_n", "p", "axis", "margin", "sweep",
                     "critical", "reps", "seed", "threads", "out", "bounds"});

    RunPlan plan;
    plan.raw = j;
    plan.config_hash = fnv1a64(j.dump());
    plan.params.kind = cfg::parse_model(cfg::text(j, P, "model"), P + ".model");

    if (const auto* w = cfg::find(j, "window")) {
        cfg::check_keys(*w, P + ".window", {"d", "L", "padding"});
        plan.params.window.d = static_cast<int>(cfg::integer(*w, P + ".window", "d", 2));
        plan.params.window.L = cfg::number(*w, P + ".window", "L", 1.0);
        plan.params.window.padding = cfg::number(*w, P + ".window", "padding", -1.0);
        if (plan.params.window.d < 1) fail(P + ".window.d", "must be >= 1");
        if (!(plan.params.window.L > 0.0)) fail(P + ".window.L", "must be > 0");
    } else {
        plan.params.window.padding = -1.0;
    }

    plan.params.lambda = cfg::number(j, P, "lambda", 1.0);
    if (!(plan.params.lambda >= 0.0)) fail(P + ".lambda", "must be >= 0");
    plan.params.r = cfg::number(j, P, "r", 1.0);
    plan.params.hex_side = cfg::number(j, P, "hex_side", 1.0);
    plan.params.lat_n = cfg::integer(j, P, "lat_n", 16);
    plan.params.p = cfg::number(j, P, "p", 0.5);
    plan.params.axis = static_cast<int>(cfg::integer(j, P, "axis", 0));
    plan.params.margin = cfg::number(j, P, "margin", -1.0);

    if (const auto* m = cfg::find(j, "marks"))
        plan.params.marks = cfg::parse_marks(*m, P + ".marks");
    if (const auto* pl = cfg::find(j, "path_loss"))
        plan.params.ell = cfg::parse_path_loss(*pl, P + ".path_loss", plan.params.window.d);
    if (const auto* s = cfg::find(j, "sinr")) {
        cfg::check_keys(*s, P + ".sinr", {"N0", "tau", "gamma", "P"});
        plan.params.sinr.N0 = cfg::number(*s, P + ".sinr", "N0", 1.0);
        plan.params.sinr.tau = cfg::number(*s, P + ".sinr", "tau", 1.0);
        plan.params.sinr.gamma = cfg::number(*s, P + ".sinr", "gamma", 0.0);
        plan.params.sinr.P = cfg::number(*s, P + ".sinr", "P", 1.0);
        try {
            plan.params.sinr.validate();
        } catch (const std::invalid_argument& e) {
            fail(P + ".sinr", e.what());
        }
    }
    if (const auto* e = cfg::find(j, "environment")) {
        const std::string ep = P + ".environment";
        cfg::check_keys(*e, ep,
                        {"kind", "lambda_s", "horizontal", "vertical", "inner_horizontal",
                         "inner_vertical", "c_norm", "normalize_reps"});
        const std::string kind = cfg::text(*e, ep, "kind");
        if (kind == "pvt") plan.params.env.kind = EnvKind::PVT;
        else if (kind == "pdt") plan.params.env.kind = EnvKind::PDT;
        else if (kind == "manhattan") plan.params.env.kind = EnvKind::ManhattanGrid;
        else if (kind == "nested_manhattan") plan.params.env.kind = EnvKind::NestedManhattanGrid;
        else fail(ep + ".kind", "unknown environment '" + kind + "'");
        plan.params.env.lambda_s = cfg::number(*e, ep, "lambda_s", 1.0);
        if (const auto* r = cfg::find(*e, "horizontal"))
            plan.params.env.laws.horizontal = cfg::parse_renewal(*r, ep + ".horizontal");
        if (const auto* r = cfg::find(*e, "vertical"))
            plan.params.env.laws.vertical = cfg::parse_renewal(*r, ep + ".vertical");
        if (const auto* r = cfg::find(*e, "inner_horizontal"))
            plan.params.env.laws.inner_horizontal = cfg::parse_renewal(*r, ep + ".inner_horizontal");
        if (const auto* r = cfg::find(*e, "inner_vertical"))
            plan.params.env.laws.inner_vertical = cfg::parse_renewal(*r, ep + ".inner_vertical");
        if (cfg::find(*e, "c_norm")) {
            plan.params.env.c_norm = cfg::number(*e, ep, "c_norm");
            if (!(plan.params.env.c_norm > 0.0)) fail(ep + ".c_norm", "must be > 0");
            plan.normalize = false;
        } else {
            plan.normalize = true;
        }
        plan.normalize_reps = cfg::integer(*e, ep, "normalize_reps", 200);
        if (plan.normalize_reps < 100) fail(ep + ".normalize_reps", "must be >= 100");
        try {
            plan.params.env.validate();
        } catch (const std::invalid_argument& ex) {
            fail(ep, ex.what());
        }
    }

    if (const auto* s = cfg::find(j, "sweep")) {
        cfg::check_keys(*s, P + ".sweep", {"axis", "grid"});
        plan.action = RunAction::Sweep;
        plan.axis = cfg::parse_axis(cfg::text(*s, P + ".sweep", "axis"), P + ".sweep.axis");
        plan.grid = cfg::number_list(*s, P + ".sweep", "grid");
        if (plan.grid.empty()) fail(P + ".sweep.grid", "must be nonempty");
        for (size_t t = 1; t < plan.grid.size(); ++t)
            if (!(plan.grid[t] > plan.grid[t - 1]))
                fail(P + ".sweep.grid", "must be strictly ascending");
    }
    if (const auto* c = cfg::find(j, "critical")) {
        if (plan.action == RunAction::Sweep)
            fail(P, "give either 'sweep' or 'critical', not both");
        cfg::check_keys(*c, P + ".critical", {"axis", "bracket", "target", "tolerance"});
        plan.action = RunAction::Critical;
        plan.axis = cfg::parse_axis(cfg::text(*c, P + ".critical", "axis"), P + ".critical.axis");
        std::vector<double> br = cfg::number_list(*c, P + ".critical", "bracket");
        if (br.size() != 2 || !(br[0] < br[1]))
            fail(P + ".critical.bracket", "must be [lo, hi] with lo < hi");
        plan.bracket_lo = br[0];
        plan.bracket_hi = br[1];
        plan.target = cfg::number(*c, P + ".critical", "target", 0.5);
        plan.tolerance = cfg::number(*c, P + ".critical", "tolerance", 0.05);
        if (!(plan.target > 0.0 && plan.target < 1.0))
            fail(P + ".critical.target", "must lie in (0, 1)");
        if (!(plan.tolerance > 0.0)) fail(P + ".critical.tolerance", "must be > 0");
    }
    if (const auto* a = cfg::find(j, "action")) {
        const std::string s = a->is_string() ? a->get<std::string>() : "";
        if (s == "run") plan.action = RunAction::Run;
        else if (s == "sweep") plan.action = RunAction::Sweep;
        else if (s == "critical") plan.action = RunAction::Critical;
        else if (s == "bounds") plan.action = RunAction::Bounds;
        else fail(P + ".action", "unknown action '" + s + "'");
    }
    if (plan.action == RunAction::Sweep && plan.grid.empty())
        fail(P + ".sweep", "sweep action needs a 'sweep' section");
    if (plan.action == RunAction::Critical && !(plan.bracket_lo < plan.bracket_hi))
        fail(P + ".critical", "critical action needs a 'critical' section");

    plan.reps = cfg::integer(j, P, "reps", 1000);
    if (plan.reps < 1) fail(P + ".reps", "must be >= 1");
    if (const auto* s = cfg::find(j, "seed")) {
        if (!s->is_number_integer() || s->get<long long>() < 0)
            fail(P + ".seed", "must be a nonnegative integer");
        plan.seed = s->get<std::uint64_t>();
        plan.seed_set = true;
    }
    plan.threads = static_cast<int>(cfg::integer(j, P, "threads", 0));
    if (plan.threads < 0) fail(P + ".threads", "must be >= 0");
    plan.out_dir = cfg::text(j, P, "out", "");

    if (const auto* b = cfg::find(j, "bounds")) {
        cfg::check_keys(*b, P + ".bounds", {"n", "M", "r", "N0", "tau", "P"});
        plan.bounds_n = cfg::integer(*b, P + ".bounds", "n", 1);
        if (plan.bounds_n < 1) fail(P + ".bounds.n", "must be >= 1");
        plan.ipar.M = cfg::number(*b, P + ".bounds", "M", 1.0);
        plan.ipar.r = cfg::number(*b, P + ".bounds", "r", 1.0);
        plan.ipar.N0 = cfg::number(*b, P + ".bounds", "N0", plan.params.sinr.N0);
        plan.ipar.tau = cfg::number(*b, P + ".bounds", "tau", plan.params.sinr.tau);
        plan.ipar.P = cfg::number(*b, P + ".bounds", "P", plan.params.sinr.P);
    } else {
        plan.ipar.N0 = plan.params.sinr.N0;
        plan.ipar.tau = plan.params.sinr.tau;
        plan.ipar.P = plan.params.sinr.P;
        plan.ipar.M = 1.0;
        plan.ipar.r = plan.params.r;
    }

    if (forced_action) plan.action = *forced_action;

    // Bounds reports never execute the model, so infeasible simulation
    // parameters only surface as per-bound notes instead of config errors.
    if (plan.action != RunAction::Bounds) {
        try {
            prepare_model(plan.params);
        } catch (const std::invalid_argument& e) {
            fail(P, e.what());
        }
    }
    return plan;
}

inline RunPlan parse_config_text(const std::string& text,
                                 std::optional<RunAction> forced_action = std::nullopt) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse: ") + e.what());
    }
    return parse_config_json(j, forced_action);
}

inline RunPlan parse_config_file(const std::string& path,
                                 std::optional<RunAction> forced_action = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), forced_action);
}

} // namespace perc
