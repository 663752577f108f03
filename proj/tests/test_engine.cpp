#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "helpers.hpp"
#include "perc/perc.hpp"

using namespace perc;

namespace {

// bernoulli(x) trial: success probability exactly x
bool coin(double x, RngStream& rng) { return rng.uniform() < x; }

ModelParams gilbert_model(double lambda, double r, double L) {
    ModelParams mp;
    mp.kind = ModelKind::Gilbert;
    mp.window = Window{2, L, -1.0};
    mp.lambda = lambda;
    mp.r = r;
    prepare_model(mp);
    return mp;
}

} // namespace

TEST_CASE("probability estimates are bit-identical across thread counts", "[engine]") {
    auto trial = [](RngStream& rng) { return coin(0.3, rng); };
    EstimateResult one = estimate_probability(trial, 9, 5000, 1);
    EstimateResult four = estimate_probability(trial, 9, 5000, 4);
    CHECK(one.estimate == four.estimate);
    CHECK(one.std_error == four.std_error);
    CHECK(one.reps == 5000);
    CHECK(one.seed == 9);
    CHECK_THAT(one.estimate, Catch::Matchers::WithinAbs(0.3, 3.0 * std::sqrt(0.21 / 5000.0)));

    // same seed, same result; different seed, different replications
    CHECK(estimate_probability(trial, 9, 5000, 2).estimate == one.estimate);
    CHECK(estimate_probability(trial, 10, 5000).estimate != one.estimate);

    CHECK_THROWS_AS(estimate_probability(trial, 9, 0), std::invalid_argument);
    auto broken = [](RngStream&) -> bool { throw std::runtime_error("boom"); };
    CHECK_THROWS_AS(estimate_probability(broken, 9, 100, 3), std::runtime_error);
}

TEST_CASE("an empty process never crosses", "[engine]") {
    ModelParams mp = gilbert_model(0.0, 1.0, 8.0);
    auto trial = [&](RngStream& rng) { return crossing_replication(mp, rng); };
    EstimateResult res = estimate_probability(trial, 42, 200);
    CHECK(res.estimate == 0.0);
    CHECK(res.std_error == 0.0);
}

TEST_CASE("a dense process essentially always crosses", "[engine]") {
    ModelParams mp = gilbert_model(10.0, 1.0, 20.0);
    auto trial = [&](RngStream& rng) { return crossing_replication(mp, rng); };
    CHECK(estimate_probability(trial, 43, 200).estimate >= 0.99);
}

TEST_CASE("rescaling a configuration preserves connectivity point by point", "[engine]") {
    const double R = 1.2;
    Window w{2, 10.0, 1.2};
    int mismatches = 0;
    for (int seed = 0; seed < 200; ++seed) {
        RngStream rng(1100, seed);
        PointCloud pts = sample_ppp(w, 0.5, rng);
        SpatialGraph g1 = gilbert_graph(pts, R);
        PointCloud scaled = scaling_transform(pts, R);
        SpatialGraph g2 = gilbert_graph(scaled, 1.0);
        CrossingRule rule1{0, 1.0}, rule2{0, 1.0 / R};
        if (crossing_indicator(pts, g1, rule1) != crossing_indicator(scaled, g2, rule2))
            ++mismatches;
    }
    CHECK(mismatches == 0);
    CHECK_THROWS_AS(scaling_transform(PointCloud{}, 0.0), std::invalid_argument);
}

TEST_CASE("rescaled models agree in distribution", "[engine]") {
    // intensity lambda at radius R matches intensity lambda R^d at radius 1
    // on the window shrunk by R
    ModelParams big = gilbert_model(0.5, 2.0, 8.0);
    ModelParams unit = gilbert_model(2.0, 1.0, 4.0);
    auto t_big = [&](RngStream& rng) { return crossing_replication(big, rng); };
    auto t_unit = [&](RngStream& rng) { return crossing_replication(unit, rng); };
    EstimateResult a = estimate_probability(t_big, 1200, 4000);
    EstimateResult b = estimate_probability(t_unit, 1201, 4000);
    CHECK_THAT(a.estimate,
               Catch::Matchers::WithinAbs(b.estimate, 3.0 * (a.std_error + b.std_error)));
}

TEST_CASE("independent thinning can only help crossing", "[engine]") {
    // superposition of two independent clouds: if the first cloud alone
    // crosses, the union crosses as well (adding points never cuts edges)
    Window w{2, 8.0, 1.0};
    int violations = 0;
    for (int seed = 0; seed < 200; ++seed) {
        RngStream rng(1300, seed);
        PointCloud sparse = sample_ppp(w, 0.8, rng);
        PointCloud extra = sample_ppp(w, 0.4, rng);
        PointCloud both = sparse;
        both.coords.insert(both.coords.end(), extra.coords.begin(), extra.coords.end());
        CrossingRule rule{0, 1.0};
        bool before = crossing_indicator(sparse, gilbert_graph(sparse, 1.0), rule);
        bool after = crossing_indicator(both, gilbert_graph(both, 1.0), rule);
        if (before && !after) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("bisection refuses a bracket that does not straddle", "[engine]") {
    CHECK_THROWS_AS(find_critical(coin, 0.1, 0.2, 0.9, 0.01, 5, 500), std::runtime_error);
    CHECK_THROWS_AS(find_critical(coin, 0.8, 0.9, 0.5, 0.01, 5, 500), std::runtime_error);
    CHECK_THROWS_AS(find_critical(coin, 0.6, 0.4, 0.5, 0.01, 5, 500), std::invalid_argument);
    CHECK_THROWS_AS(find_critical(coin, 0.2, 0.8, 0.5, 0.0, 5, 500), std::invalid_argument);
    CHECK_THROWS_AS(find_critical(coin, 0.2, 0.8, 1.5, 0.01, 5, 500), std::invalid_argument);
}

TEST_CASE("bisection tracks a clean response and its trace", "[engine]") {
    CriticalResult res = find_critical(coin, 0.25, 0.75, 0.5, 0.05, 17, 2000);
    CHECK(res.increasing);
    CHECK_FALSE(res.monotone_warning);
    CHECK(res.lower >= 0.25);
    CHECK(res.upper <= 0.75);
    CHECK(res.upper - res.lower <= 0.05);
    CHECK(res.estimate == 0.5 * (res.lower + res.upper));
    CHECK_THAT(res.estimate, Catch::Matchers::WithinAbs(0.5, 0.1));

    // bracket [0.25, 0.75] at tolerance 0.05 takes exactly 4 halvings
    REQUIRE(res.trace.size() == 6);
    CHECK(res.trace[0].x == 0.25);
    CHECK(res.trace[1].x == 0.75);
    for (const ProbePoint& p : res.trace) CHECK(p.result.reps == 2000);
}

TEST_CASE("bisection detects a decreasing response", "[engine]") {
    auto fade = [](double x, RngStream& rng) { return rng.uniform() > x; };
    CriticalResult res = find_critical(fade, 0.2, 0.8, 0.5, 0.02, 23, 2000);
    CHECK_FALSE(res.increasing);
    CHECK_THAT(res.estimate, Catch::Matchers::WithinAbs(0.5, 0.05));
}

TEST_CASE("bond bisection lands near one half", "[engine]") {
    auto trial = [](double p, RngStream& rng) {
        BondLattice lat = sample_bond_lattice(2, 32, p, rng);
        return bond_crossing(lat, 0);
    };
    CriticalResult res = find_critical(trial, 0.25, 0.75, 0.5, 0.05, 31, 400);
    CHECK(res.increasing);
    CHECK_THAT(res.estimate, Catch::Matchers::WithinAbs(0.5, 0.12));
}

TEST_CASE("triangular-site bisection lands near one half", "[engine]") {
    auto trial = [](double p, RngStream& rng) {
        TriangularSiteLattice lat = sample_tri_lattice(32, 32, p, rng);
        return tri_crossing(lat);
    };
    CriticalResult res = find_critical(trial, 0.3, 0.7, 0.5, 0.03, 37, 1000);
    CHECK(res.increasing);
    CHECK_THAT(res.estimate, Catch::Matchers::WithinAbs(0.5, 0.05));
}

TEST_CASE("sweeps validate their grid and flag positive points", "[engine]") {
    CHECK_THROWS_AS(sweep_grid(coin, {}, 1, 100), std::invalid_argument);
    CHECK_THROWS_AS(sweep_grid(coin, {0.2, 0.2}, 1, 100), std::invalid_argument);
    CHECK_THROWS_AS(sweep_grid(coin, {0.3, 0.1}, 1, 100), std::invalid_argument);

    // deterministic step response: positive strictly below 0.35
    auto step = [](double x, RngStream&) { return x < 0.35; };
    SweepResult sw = sweep_grid(step, {0.1, 0.3, 0.5}, 1, 50);
    REQUIRE(sw.points.size() == 3);
    CHECK(sw.points[0].result.estimate == 1.0);
    CHECK(sw.points[2].result.estimate == 0.0);
    CHECK(sw.any_positive);
    CHECK(sw.largest_positive == 0.3);

    auto never = [](double, RngStream&) { return false; };
    SweepResult off = sweep_grid(never, {0.1, 0.2}, 1, 50);
    CHECK_FALSE(off.any_positive);
    CHECK(off.largest_positive == 0.0);
}

TEST_CASE("an interference sweep at zero reproduces the distance model bit for bit",
          "[engine]") {
    ModelParams mp;
    mp.kind = ModelKind::SinrConst;
    mp.window = Window{2, 10.0, -1.0};
    mp.lambda = 1.2;
    mp.ell = PathLoss::min_power_law(4.0, 2);
    mp.sinr.N0 = 0.0625;
    mp.sinr.tau = 1.0;
    mp.sinr.P = 1.0;
    prepare_model(mp);

    const std::uint64_t seed = 7777;
    const long long reps = 300;
    auto trial = [&](double x, RngStream& rng) {
        return crossing_replication(with_axis_value(mp, SweepAxis::Gamma, x), rng);
    };
    SweepResult sw = sweep_grid(trial, {0.0, 0.05, 0.1}, seed, reps);

    ModelParams mg;
    mg.kind = ModelKind::Gilbert;
    mg.window = mp.window; // padding already resolved to the noise-only reach
    mg.lambda = mp.lambda;
    mg.r = snr_radius(mp.ell, mp.sinr.P, mp.sinr.N0, mp.sinr.tau);
    mg.margin = mp.margin;
    prepare_model(mg);
    auto gtrial = [&](RngStream& rng) { return crossing_replication(mg, rng); };
    EstimateResult ref = estimate_probability(gtrial, RngStream::mix(seed, 0), reps);

    CHECK(sw.points[0].result.estimate == ref.estimate);
    CHECK(sw.points[0].result.std_error == ref.std_error);
}

TEST_CASE("crossing fades as interference cancellation weakens", "[engine]") {
    ModelParams mp;
    mp.kind = ModelKind::SinrConst;
    mp.window = Window{2, 10.0, -1.0};
    mp.lambda = 1.2;
    mp.ell = PathLoss::min_power_law(4.0, 2);
    mp.sinr.N0 = 0.0625;
    mp.sinr.tau = 1.0;
    mp.sinr.P = 1.0;
    prepare_model(mp);
    auto trial = [&](double x, RngStream& rng) {
        return crossing_replication(with_axis_value(mp, SweepAxis::Gamma, x), rng);
    };
    SweepResult sw = sweep_grid(trial, {0.0, 0.02, 0.05, 0.1, 0.3}, 555, 400);
    for (size_t i = 0; i + 1 < sw.points.size(); ++i) {
        double slack = 3.0 * (sw.points[i].result.std_error + sw.points[i + 1].result.std_error);
        CHECK(sw.points[i + 1].result.estimate <= sw.points[i].result.estimate + slack);
    }

    // interference-free crossing is solidly positive at this intensity
    CHECK(sw.points[0].result.estimate - 3.0 * sw.points[0].result.std_error > 0.0);
    CHECK(sw.any_positive);

    // per-seed coupling: a crossing at strong interference persists at weak
    int violations = 0;
    for (int seed = 0; seed < 100; ++seed) {
        RngStream r1(1400, seed), r2(1400, seed);
        bool strong = crossing_replication(with_axis_value(mp, SweepAxis::Gamma, 0.3), r1);
        bool weak = crossing_replication(with_axis_value(mp, SweepAxis::Gamma, 0.05), r2);
        if (strong && !weak) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("a thin process never shows a significant sweep point", "[engine]") {
    ModelParams mp;
    mp.kind = ModelKind::SinrConst;
    mp.window = Window{2, 10.0, -1.0};
    mp.lambda = 0.03;
    mp.ell = PathLoss::min_power_law(4.0, 2);
    mp.sinr.N0 = 0.0625;
    mp.sinr.tau = 1.0;
    mp.sinr.P = 1.0;
    prepare_model(mp);
    auto trial = [&](double x, RngStream& rng) {
        return crossing_replication(with_axis_value(mp, SweepAxis::Gamma, x), rng);
    };
    SweepResult sw = sweep_grid(trial, {0.0, 0.1}, 808, 200);
    CHECK_FALSE(sw.any_positive);
    CHECK(sw.largest_positive == 0.0);
}

TEST_CASE("axis overrides validate their target model", "[engine]") {
    ModelParams mp = gilbert_model(1.0, 1.0, 8.0);
    CHECK_THROWS_AS(with_axis_value(mp, SweepAxis::Gamma, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(with_axis_value(mp, SweepAxis::P, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(with_axis_value(mp, SweepAxis::Lambda, -1.0), std::invalid_argument);
    CHECK(with_axis_value(mp, SweepAxis::Lambda, 2.5).lambda == 2.5);

    ModelParams lat;
    lat.kind = ModelKind::Bond;
    lat.window.d = 2;
    lat.lat_n = 8;
    prepare_model(lat);
    CHECK_THROWS_AS(with_axis_value(lat, SweepAxis::P, 1.5), std::invalid_argument);
    CHECK(with_axis_value(lat, SweepAxis::P, 0.3).p == 0.3);
}

TEST_CASE("unit ball volumes", "[engine]") {
    CHECK_THAT(unit_ball_volume(1), Catch::Matchers::WithinRel(2.0, 1e-12));
    CHECK_THAT(unit_ball_volume(2), Catch::Matchers::WithinRel(std::numbers::pi, 1e-12));
    CHECK_THAT(unit_ball_volume(3), Catch::Matchers::WithinRel(4.0 * std::numbers::pi / 3.0, 1e-12));
    CHECK_THROWS_AS(unit_ball_volume(0), std::invalid_argument);
}

TEST_CASE("branching comparison gives the closed-form safe intensity", "[engine]") {
    BranchingBound b = branching_subcritical_bound(MarkDistribution::constant(1.0), 2);
    CHECK_THAT(b.C, Catch::Matchers::WithinRel(8.0 * std::numbers::pi, 1e-12));
    CHECK(b.moment == 1.0);
    CHECK_THAT(b.lambda0, Catch::Matchers::WithinRel(1.0 / (8.0 * std::numbers::pi), 1e-12));
    CHECK_THAT(b.lambda0, Catch::Matchers::WithinAbs(0.039788735772973836, 1e-15));

    // heavier radii can only lower the safe intensity
    BranchingBound big = branching_subcritical_bound(MarkDistribution::constant(2.0), 2);
    CHECK(big.lambda0 < b.lambda0);
    CHECK(big.moment == 8.0);

    // a tail too fat for the 2d-1 moment is a hard error
    CHECK_THROWS_AS(branching_subcritical_bound(MarkDistribution::pareto_tail(1.0, 1.0), 2),
                    std::domain_error);
    CHECK_THROWS_AS(branching_subcritical_bound(MarkDistribution::pareto_tail(3.0, 1.0), 2),
                    std::domain_error);
    // alpha strictly above the moment order converges
    CHECK_NOTHROW(branching_subcritical_bound(MarkDistribution::pareto_tail(3.5, 1.0), 2));
}

TEST_CASE("branching offspring means start from the exact first row", "[engine]") {
    MarkDistribution law = MarkDistribution::two_point(0.7, 0.3, 2.3, 0.7);
    const double pi = std::numbers::pi;
    // integerized radii: ceil(0.7) = 1 with mass 0.3, ceil(2.3) = 3 with mass 0.7
    CHECK_THAT(branching_matrix_entry(law, 2, 1.5, 0, 1),
               Catch::Matchers::WithinRel(1.5 * 0.3 * pi * 1.0, 1e-12));
    CHECK(branching_matrix_entry(law, 2, 1.5, 0, 2) == 0.0);
    CHECK_THAT(branching_matrix_entry(law, 2, 1.5, 0, 3),
               Catch::Matchers::WithinRel(1.5 * 0.7 * pi * 9.0, 1e-12));
    CHECK_THROWS_AS(branching_matrix_entry(law, 2, 1.5, -1, 0), std::invalid_argument);

    // every entry sits below the product bound C lambda pmf(j) i^{d-1} j^d
    MarkDistribution heavy = MarkDistribution::pareto_tail(3.0, 1.0);
    const double C = 8.0 * pi;
    int violations = 0;
    for (long long i = 1; i <= 50; ++i)
        for (long long j = 1; j <= 50; ++j) {
            double mu = branching_matrix_entry(heavy, 2, 0.7, i, j);
            double cap = C * 0.7 * heavy.ceil_pmf(j) * static_cast<double>(i) *
                         static_cast<double>(j) * static_cast<double>(j);
            if (mu > cap * (1.0 + 1e-12)) ++violations;
        }
    CHECK(violations == 0);
}

TEST_CASE("interference lattice constant is frozen and tail-controlled", "[engine]") {
    K0Result k = interference_k0(PathLoss::min_power_law(4.0, 2));
    CHECK_THAT(k.K0, Catch::Matchers::WithinRel(143.4386457255206, 1e-9));
    CHECK(k.tail_fraction < 1e-9);
    CHECK(k.tail_fraction > 0.0);

    // coarser lattice spacing shrinks the sum
    K0Result k2 = interference_k0(PathLoss::min_power_law(4.0, 2), 2);
    CHECK(k2.K0 < k.K0);

    CHECK_THROWS_AS(interference_k0(PathLoss::min_power_law(4.0, 2), 0), std::invalid_argument);
    CHECK_THROWS_AS(interference_k0(PathLoss::min_power_law(2.0, 2)), std::runtime_error);
}

TEST_CASE("half-distance and interference tolerance constants", "[engine]") {
    PathLoss hard = PathLoss::min_power_law(4.0, 2);
    CHECK_THAT(delta_half_distance(hard, 0.0625, 1.0, 1.0),
               Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THROWS_AS(delta_half_distance(hard, 2.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(delta_half_distance(hard, 0.0625, 1.0, 0.0), std::invalid_argument);

    // gamma* = (N0 / M) (ell(delta)/ell(2 delta) - 1) = 0.00625 * 15
    CHECK_THAT(gamma_star_bound(hard, 0.0625, 1.0, 10.0, 1.0),
               Catch::Matchers::WithinRel(0.09375, 1e-9));
    CHECK_THROWS_AS(gamma_star_bound(hard, 0.0625, 1.0, 0.0, 1.0), std::invalid_argument);

    PathLoss soft = PathLoss::power_law_one_plus(3.0, 2);
    CHECK_THAT(gamma_prime_bound(soft, 0.1, 0.5, 1.0, 10.0, 1.0),
               Catch::Matchers::WithinRel(0.015, 1e-9));
    // feasible link distances sit strictly between the plateau and the
    // noise-only radius
    double rB = std::cbrt(20.0) - 1.0;
    CHECK(gamma_prime_bound(soft, 0.1, 0.5, 1.0, 10.0, 0.999 * rB) > 0.0);
    CHECK_THROWS_AS(gamma_prime_bound(soft, 0.1, 0.5, 1.0, 10.0, 1.01 * rB),
                    std::invalid_argument);
    CHECK_THROWS_AS(gamma_prime_bound(hard, 0.0625, 1.0, 1.0, 10.0, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(gamma_prime_bound(soft, 0.1, 0.5, 1e-3, 10.0, 1.0), std::invalid_argument);

    InterferenceParams par;
    par.N0 = 0.1;
    par.tau = 0.5;
    par.P = 1.0;
    par.M = 10.0;
    par.r = 1.0;
    InterferenceConstants all = interference_constants(soft, 1, par);
    CHECK_THAT(all.r_B, Catch::Matchers::WithinAbs(rB, 1e-9));
    CHECK_THAT(all.gamma_prime, Catch::Matchers::WithinRel(0.015, 1e-9));
    CHECK_THAT(all.delta, Catch::Matchers::WithinAbs(rB / 2.0, 1e-9));
    CHECK(all.gamma_star > 0.0);
    CHECK(all.k0.K0 > 0.0);
}

TEST_CASE("coverage moment evaluates, bounds, and reports divergence", "[engine]") {
    PathLoss hard = PathLoss::min_power_law(4.0, 2);
    MarkDistribution heavy = MarkDistribution::pareto_tail(1.0, 1.0);

    // layer cake: int_0^1 1 dt + int_1^inf t^{-4/3} dt = 4
    ThetaMomentCheck a = theta_moment_check(hard, heavy, 2, 1.0, 1.0);
    CHECK(a.finite);
    CHECK_THAT(a.value, Catch::Matchers::WithinRel(4.0, 1e-6));
    CHECK(a.alpha_beta_ok); // 1 * 4 > 3
    CHECK(a.note == "finite");

    ThetaMomentCheck b = theta_moment_check(hard, MarkDistribution::pareto_tail(0.5, 1.0), 2,
                                            1.0, 1.0);
    CHECK_FALSE(b.finite);
    CHECK(std::isinf(b.value));
    CHECK_FALSE(b.alpha_beta_ok); // 0.5 * 4 < 3
    CHECK(b.note == "divergent (integrand tail not decaying)");

    // a support cutoff caps the moment by r_max^(2d-1): here exactly 2.5
    ThetaMomentCheck c =
        theta_moment_check(PathLoss::compact_support(4.0, 2.0, 2), heavy, 2, 1.0, 1.0);
    CHECK(c.note == "finite (compact support)");
    CHECK_THAT(c.value, Catch::Matchers::WithinRel(2.5, 1e-6));
    CHECK(c.value <= 8.0);

    // bounded powers cap it by the strongest sender's reach cubed
    ThetaMomentCheck d = theta_moment_check(
        hard, MarkDistribution::two_point(1.0, 0.5, 4.0, 0.5), 2, 1.0, 1.0);
    CHECK(d.note == "finite (bounded power)");
    CHECK_THAT(d.value, Catch::Matchers::WithinRel(std::sqrt(2.0), 1e-6));
    CHECK(d.value <= 2.0 * std::sqrt(2.0) + 1e-9);

    ThetaMomentCheck e =
        theta_moment_check(hard, MarkDistribution::constant(1.0), 2, 1.0, 1.0);
    CHECK(e.value == 0.0); // a unit sender exactly at the floor reaches nobody
    CHECK(e.note == "finite (bounded power)");

    CHECK_THROWS_AS(theta_moment_check(hard, heavy, 2, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("interference truncation bias integrates the profile tail", "[engine]") {
    PathLoss hard = PathLoss::min_power_law(4.0, 2);
    // 2 pi int_2^inf r^(1-4) dr = pi / 4
    CHECK_THAT(truncation_bias(hard, 1.0, 2.0),
               Catch::Matchers::WithinRel(std::numbers::pi / 4.0, 1e-6));
    CHECK_THAT(truncation_bias(hard, 3.0, 2.0),
               Catch::Matchers::WithinRel(3.0 * std::numbers::pi / 4.0, 1e-6));
    // no padding at all: the full integral 2 pi int r ell = 2 pi
    CHECK_THAT(truncation_bias(hard, 1.0, 0.0),
               Catch::Matchers::WithinRel(2.0 * std::numbers::pi, 1e-6));
    CHECK(std::isinf(truncation_bias(PathLoss::min_power_law(2.0, 2), 1.0, 2.0)));
    CHECK_THROWS_AS(truncation_bias(hard, -1.0, 2.0), std::invalid_argument);
}

TEST_CASE("path-counting decay bound", "[engine]") {
    CHECK(saw_subcritical_bound(0.2, 2, 20) == std::pow(0.8, 20));
    CHECK_THAT(saw_subcritical_bound(0.2, 2, 20),
               Catch::Matchers::WithinRel(0.011529215046068481, 1e-12));
    CHECK(saw_subcritical_bound(0.25, 2, 50) == 1.0); // vacuous exactly at 1/(2d)
    CHECK(saw_subcritical_bound(0.3, 2, 10) > 1.0);   // and useless above it
    CHECK(saw_subcritical_bound(0.2, 2, 0) == 1.0);
    CHECK(saw_subcritical_bound(0.2, 2, 21) < saw_subcritical_bound(0.2, 2, 20));
    CHECK_THROWS_AS(saw_subcritical_bound(-0.1, 2, 5), std::invalid_argument);
    CHECK_THROWS_AS(saw_subcritical_bound(1.1, 2, 5), std::invalid_argument);
    CHECK_THROWS_AS(saw_subcritical_bound(0.2, 0, 5), std::invalid_argument);
    CHECK_THROWS_AS(saw_subcritical_bound(0.2, 2, -1), std::invalid_argument);
}

TEST_CASE("contour-counting enclosure bound", "[engine]") {
    CHECK_THAT(peierls_supercritical_bound(0.9),
               Catch::Matchers::WithinRel(0.004876190476190476, 1e-12));
    CHECK_THAT(peierls_supercritical_bound(0.9, true),
               Catch::Matchers::WithinRel(0.030476190476190476, 1e-12));
    CHECK(peierls_supercritical_bound(0.95) < peierls_supercritical_bound(0.9));
    CHECK(peierls_supercritical_bound(1.0) == 0.0);
    CHECK(peierls_supercritical_bound(0.999999) < 1e-30);
    CHECK_THROWS_AS(peierls_supercritical_bound(0.75), std::invalid_argument);
    CHECK_THROWS_AS(peierls_supercritical_bound(0.5), std::invalid_argument);
    CHECK_THROWS_AS(peierls_supercritical_bound(1.1), std::invalid_argument);
}

TEST_CASE("hexagon bracket endpoints and their exact ratio", "[engine]") {
    auto [lo, hi] = hexagon_threshold_interval();
    CHECK_THAT(lo, Catch::Matchers::WithinAbs(0.26679247418954305, 1e-15));
    CHECK_THAT(hi, Catch::Matchers::WithinAbs(3.4683021644640597, 1e-14));
    CHECK_THAT(hi / lo, Catch::Matchers::WithinAbs(13.0, 1e-13));
}
