#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <set>
#include <vector>

#include "helpers.hpp"
#include "perc/perc.hpp"

using namespace perc;

TEST_CASE("rng streams are deterministic and distinct", "[points]") {
    RngStream a(42, 7), b(42, 7), c(42, 8);
    std::vector<double> va, vb, vc;
    for (int i = 0; i < 100; ++i) {
        va.push_back(a.uniform());
        vb.push_back(b.uniform());
        vc.push_back(c.uniform());
    }
    CHECK(va == vb);
    CHECK(va != vc);
    CHECK(RngStream::mix(1, 2) == RngStream::mix(1, 2));
    CHECK(RngStream::mix(1, 2) != RngStream::mix(2, 1));
}

TEST_CASE("rng distributions match their moments", "[points]") {
    RngStream rng(5, 0);
    const int n = 200000;
    double esum = 0.0, psum = 0.0, psq = 0.0;
    for (int i = 0; i < n; ++i) {
        esum += rng.exponential(2.0);
        double p = static_cast<double>(rng.poisson(3.0));
        psum += p;
        psq += p * p;
    }
    double emean = esum / n;
    CHECK_THAT(emean, Catch::Matchers::WithinAbs(0.5, 3.0 * 0.5 / std::sqrt(n)));
    double pmean = psum / n;
    double pvar = psq / n - pmean * pmean;
    CHECK_THAT(pmean, Catch::Matchers::WithinAbs(3.0, 3.0 * std::sqrt(3.0 / n)));
    CHECK_THAT(pvar, Catch::Matchers::WithinAbs(3.0, 0.15));
}

TEST_CASE("window validation", "[points]") {
    Window w{2, 10.0, 0.0};
    CHECK_NOTHROW(w.validate());
    CHECK(w.volume() == 100.0);
    CHECK(w.side_padded() == 10.0);
    CHECK_THROWS_AS((Window{1, 10.0, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((Window{2, 0.0, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((Window{2, 10.0, -1.0}.validate()), std::invalid_argument);
    Window padded{2, 10.0, 2.0};
    CHECK(padded.lo() == -2.0);
    CHECK(padded.hi() == 12.0);
    CHECK(padded.volume_padded() == 14.0 * 14.0);
}

TEST_CASE("ppp sampling basics", "[points]") {
    Window w{2, 10.0, 0.0};
    RngStream rng(9, 0);
    SECTION("zero intensity is always empty") {
        for (int s = 0; s < 20; ++s) {
            RngStream r(9, static_cast<std::uint64_t>(s));
            CHECK(sample_ppp(w, 0.0, r).size() == 0);
        }
    }
    SECTION("negative intensity and runaway counts are rejected") {
        CHECK_THROWS_AS(sample_ppp(w, -1.0, rng), std::invalid_argument);
        CHECK_THROWS_AS(sample_ppp(w, 2e6, rng), std::runtime_error); // 2e8 expected points
    }
    SECTION("identical streams give bit-identical clouds") {
        RngStream r1(123, 4), r2(123, 4);
        PointCloud c1 = sample_ppp(w, 1.5, r1), c2 = sample_ppp(w, 1.5, r2);
        CHECK(c1.coords == c2.coords);
    }
    SECTION("points lie in the padded window and are distinct") {
        Window wp{2, 10.0, 1.5};
        RngStream r(77, 0);
        PointCloud c = sample_ppp(wp, 1.0, r);
        for (long long i = 0; i < c.size(); ++i) CHECK(wp.contains_padded(c.pt(i)));
        std::set<std::pair<double, double>> uniq;
        for (long long i = 0; i < c.size(); ++i) uniq.insert({c.pt(i)[0], c.pt(i)[1]});
        CHECK(static_cast<long long>(uniq.size()) == c.size());
    }
}

TEST_CASE("ppp count moments and independence", "[points]") {
    Window w{2, 10.0, 0.0};
    const int reps = 10000;
    double sum = 0.0;
    double s_left = 0.0, s_right = 0.0, s_prod = 0.0;
    for (int r = 0; r < reps; ++r) {
        RngStream rng(31, static_cast<std::uint64_t>(r));
        PointCloud c = sample_ppp(w, 1.0, rng);
        sum += static_cast<double>(c.size());
        RngStream rng2(32, static_cast<std::uint64_t>(r));
        PointCloud c2 = sample_ppp(w, 2.0, rng2);
        double nl = 0.0, nr = 0.0;
        for (long long i = 0; i < c2.size(); ++i) (c2.pt(i)[0] < 5.0 ? nl : nr) += 1.0;
        s_left += nl;
        s_right += nr;
        s_prod += nl * nr;
    }
    // mean count lambda * L^d = 100, stderr 10/sqrt(reps)
    CHECK_THAT(sum / reps, Catch::Matchers::WithinAbs(100.0, 3.0 * 10.0 / std::sqrt(reps)));
    // counts in disjoint halves are uncorrelated: each half has mean/var 100
    double cov = s_prod / reps - (s_left / reps) * (s_right / reps);
    CHECK_THAT(cov, Catch::Matchers::WithinAbs(0.0, 3.0 * 100.0 / std::sqrt(reps)));
}

TEST_CASE("ppp stationarity across unit boxes", "[points]") {
    Window w{2, 8.0, 0.0};
    const int reps = 5000;
    const double boxes[4][2] = {{0.0, 0.0}, {3.0, 2.0}, {6.0, 5.0}, {1.0, 6.0}};
    double counts[4] = {0, 0, 0, 0};
    for (int r = 0; r < reps; ++r) {
        RngStream rng(77, static_cast<std::uint64_t>(r));
        PointCloud c = sample_ppp(w, 1.5, rng);
        for (long long i = 0; i < c.size(); ++i)
            for (int b = 0; b < 4; ++b)
                if (c.pt(i)[0] >= boxes[b][0] && c.pt(i)[0] < boxes[b][0] + 1.0 &&
                    c.pt(i)[1] >= boxes[b][1] && c.pt(i)[1] < boxes[b][1] + 1.0)
                    counts[b] += 1.0;
    }
    for (int b = 0; b < 4; ++b)
        CHECK_THAT(counts[b] / reps,
                   Catch::Matchers::WithinAbs(1.5, 3.0 * std::sqrt(1.5 / reps)));
}

TEST_CASE("superposition equals one-shot sampling in distribution", "[points]") {
    Window w{2, 6.0, 0.0};
    const int reps = 10000;
    const double l1 = 0.8, l2 = 1.7;
    double sum_union = 0.0, sq_union = 0.0, sum_one = 0.0, sq_one = 0.0;
    for (int r = 0; r < reps; ++r) {
        RngStream ra(100, static_cast<std::uint64_t>(r));
        RngStream rb(101, static_cast<std::uint64_t>(r));
        RngStream rc(102, static_cast<std::uint64_t>(r));
        double u = static_cast<double>(sample_ppp(w, l1, ra).size() + sample_ppp(w, l2, rb).size());
        double o = static_cast<double>(sample_ppp(w, l1 + l2, rc).size());
        sum_union += u;
        sq_union += u * u;
        sum_one += o;
        sq_one += o * o;
    }
    const double mean = (l1 + l2) * 36.0;
    double se = std::sqrt(mean / reps);
    CHECK_THAT(sum_union / reps, Catch::Matchers::WithinAbs(mean, 3.0 * se));
    CHECK_THAT(sum_one / reps, Catch::Matchers::WithinAbs(mean, 3.0 * se));
    // Poisson: variance equals the mean for both constructions
    double var_union = sq_union / reps - (sum_union / reps) * (sum_union / reps);
    double var_one = sq_one / reps - (sum_one / reps) * (sum_one / reps);
    CHECK_THAT(var_union, Catch::Matchers::WithinAbs(mean, 0.06 * mean));
    CHECK_THAT(var_one, Catch::Matchers::WithinAbs(mean, 0.06 * mean));
}

TEST_CASE("mark distribution parameters and closed forms", "[points]") {
    CHECK(MarkDistribution::constant(2.5).mean() == 2.5);
    CHECK(MarkDistribution::uniform(1.0, 3.0).mean() == 2.0);
    CHECK(MarkDistribution::uniform(1.0, 3.0).tail(2.0) == 0.5);
    CHECK(MarkDistribution::two_point(1.0, 0.25, 4.0, 0.75).mean() == 3.25);
    // ParetoTail: P(rho > r) = min(1, (r/rstar)^-alpha)
    MarkDistribution par = MarkDistribution::pareto_tail(3.0, 1.0);
    CHECK(par.tail(2.0) == 0.125);
    CHECK(par.tail(0.5) == 1.0);
    CHECK(par.mean() == 1.5); // alpha/(alpha-1) * rstar

    CHECK_THROWS_AS(MarkDistribution::constant(-1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(MarkDistribution::constant(0.0).validate(), std::invalid_argument); // P(rho=0)=1
    CHECK_THROWS_AS(MarkDistribution::uniform(3.0, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(MarkDistribution::pareto_tail(0.0, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(MarkDistribution::two_point(1.0, 1.5, 2.0, -0.5).validate(),
                    std::invalid_argument);
}

TEST_CASE("mark sampling matches closed forms", "[points]") {
    const int n = 100000;
    SECTION("constant marks are exact and attach_marks keeps positions") {
        Window w{2, 5.0, 0.0};
        RngStream rng(3, 0);
        PointCloud cloud = sample_ppp(w, 2.0, rng);
        MarkedPointCloud mc = attach_marks(cloud, MarkDistribution::constant(1.0), rng);
        CHECK(mc.base.coords == cloud.coords);
        for (double m : mc.marks) CHECK(m == 1.0);
    }
    SECTION("two-point mean") {
        RngStream rng(4, 0);
        MarkDistribution d = MarkDistribution::two_point(1.0, 0.5, 2.0, 0.5);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += d.sample(rng);
        CHECK_THAT(sum / n, Catch::Matchers::WithinAbs(1.5, 3.0 * 0.5 / std::sqrt(n)));
    }
    SECTION("pareto tail probability") {
        RngStream rng(5, 0);
        MarkDistribution d = MarkDistribution::pareto_tail(3.0, 1.0);
        int over = 0;
        for (int i = 0; i < n; ++i)
            if (d.sample(rng) > 2.0) ++over;
        double p = static_cast<double>(over) / n;
        CHECK_THAT(p, Catch::Matchers::WithinAbs(0.125, 3.0 * std::sqrt(0.125 * 0.875 / n)));
    }
    SECTION("geometric-like law lives on positive integers") {
        RngStream rng(6, 0);
        MarkDistribution d = MarkDistribution::geometric_like(0.5);
        for (int i = 0; i < 1000; ++i) {
            double v = d.sample(rng);
            CHECK(v >= 1.0);
            CHECK(v == std::floor(v));
        }
    }
}

TEST_CASE("quadrature building blocks", "[points]") {
    auto sq = [](double x) { return x * x; };
    CHECK_THAT(adaptive_simpson(sq, 0.0, 1.0, 1e-10), Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-9));
    std::vector<double> lo{0.0, 0.0}, hi{2.0, 1.0};
    auto f = [](const double* x) { return x[0] * x[1]; };
    BoxQuadResult bq = integrate_box(f, lo, hi, 1e-9);
    CHECK(bq.converged);
    CHECK_THAT(bq.value, Catch::Matchers::WithinAbs(1.0, 1e-7));
    TailQuadResult tq = integrate_halfline([](double r) { return std::exp(-r); }, 1e-9);
    CHECK(tq.converged);
    CHECK_THAT(tq.value, Catch::Matchers::WithinAbs(1.0, 1e-7));
    TailQuadResult div = integrate_halfline([](double r) { return 1.0 / (1.0 + r); }, 1e-9);
    CHECK_FALSE(div.converged);
}

namespace {

std::vector<PointCloud> sample_clouds(const Window& w, double lambda, int reps,
                                      std::uint64_t seed) {
    std::vector<PointCloud> clouds;
    clouds.reserve(static_cast<size_t>(reps));
    for (int r = 0; r < reps; ++r) {
        RngStream rng(seed, static_cast<std::uint64_t>(r));
        clouds.push_back(sample_ppp(w, lambda, rng));
    }
    return clouds;
}

} // namespace

TEST_CASE("empirical laplace functional", "[points]") {
    Window w{2, 3.0, 0.0};
    auto clouds = sample_clouds(w, 1.0, 2000, 11);
    SECTION("zero field gives exactly one") {
        EstimateResult est = empirical_laplace(ScalarField([](const double*, int) { return 0.0; }),
                                               clouds);
        CHECK(est.estimate == 1.0);
        CHECK(est.std_error == 0.0);
    }
    SECTION("negative field is rejected") {
        CHECK_THROWS_AS(
            empirical_laplace(ScalarField([](const double*, int) { return -0.1; }), clouds),
            std::invalid_argument);
    }
    SECTION("indicator field matches the closed form") {
        auto f = ScalarField([](const double* x, int) {
            return (x[0] < 1.0 && x[1] < 1.0) ? 1.0 : 0.0;
        });
        auto big = sample_clouds(w, 1.0, 20000, 12);
        EstimateResult est = empirical_laplace(f, big);
        const double truth = std::exp(std::exp(-1.0) - 1.0); // exp(lambda*A*(e^-1 - 1)), A = 1
        CHECK_THAT(est.estimate, Catch::Matchers::WithinAbs(truth, 3.0 * est.std_error));
        CHECK_THAT(truth, Catch::Matchers::WithinAbs(0.5315, 2e-4));
    }
    SECTION("marked field with constant marks reduces to the unmarked case bit-for-bit") {
        auto f = ScalarField([](const double* x, int) {
            return (x[0] < 1.0 && x[1] < 1.0) ? 1.0 : 0.0;
        });
        auto fm = MarkedScalarField([](const double* x, int, double m) {
            return (x[0] < 1.0 && x[1] < 1.0) ? m : 0.0;
        });
        std::vector<MarkedPointCloud> marked;
        for (const auto& c : clouds) {
            RngStream mr(0, 0);
            marked.push_back(attach_marks(c, MarkDistribution::constant(1.0), mr));
        }
        EstimateResult plain = empirical_laplace(f, clouds);
        EstimateResult mk = empirical_laplace(fm, marked);
        CHECK(plain.estimate == mk.estimate);
        CHECK(plain.std_error == mk.std_error);
    }
}

TEST_CASE("campbell closed forms", "[points]") {
    // indicator discontinuities are placed on dyadic fractions of the window
    // so the adaptive quadrature resolves them exactly at shallow depth
    Window w{2, 2.0, 0.0};
    SECTION("zero field") {
        CHECK(campbell_laplace(ScalarField([](const double*, int) { return 0.0; }), 1.7, w) == 1.0);
    }
    SECTION("indicator of area A") {
        auto f = ScalarField([](const double* x, int) {
            return x[0] < 1.0 ? 1.0 : 0.0;
        });
        const double lambda = 0.7, A = 2.0; // [0,1] x [0,2]
        double v = campbell_laplace(f, lambda, w);
        CHECK_THAT(v, Catch::Matchers::WithinRel(std::exp(lambda * A * (std::exp(-1.0) - 1.0)),
                                                 1e-5));
    }
    SECTION("marked product-intensity variant with a constant kernel") {
        auto fm = MarkedScalarField([](const double* x, int, double m) {
            return (x[0] < 1.0 && x[1] < 1.0) ? m : 0.0;
        });
        double v = campbell_laplace_marked(fm, 1.0, w, MarkDistribution::constant(1.0));
        CHECK_THAT(v, Catch::Matchers::WithinRel(std::exp(std::exp(-1.0) - 1.0), 1e-5));
    }
    SECTION("negative field is rejected") {
        CHECK_THROWS(campbell_laplace(ScalarField([](const double*, int) { return -1.0; }), 1.0, w));
    }
}

TEST_CASE("marking theorem holds for three kernels", "[points]") {
    // E[exp(-sum f(X_i, m_i))] vs the product-intensity closed form, for a
    // smooth marked field and three mark kernels.
    Window w{2, 2.0, 0.0};
    const double lambda = 1.0;
    auto f = MarkedScalarField([](const double* x, int, double m) {
        return m * std::exp(-(x[0] + x[1]));
    });
    const MarkDistribution kernels[] = {
        MarkDistribution::constant(1.0),
        MarkDistribution::two_point(0.5, 0.5, 2.0, 0.5),
        MarkDistribution::uniform(0.0, 2.0),
    };
    int kseed = 400;
    for (const auto& kernel : kernels) {
        std::vector<MarkedPointCloud> clouds;
        for (int r = 0; r < 20000; ++r) {
            RngStream rng(static_cast<std::uint64_t>(kseed), static_cast<std::uint64_t>(r));
            clouds.push_back(attach_marks(sample_ppp(w, lambda, rng), kernel, rng));
        }
        ++kseed;
        EstimateResult est = empirical_laplace(f, clouds);
        double truth = campbell_laplace_marked(f, lambda, w, kernel);
        INFO("kernel mean " << kernel.mean());
        CHECK_THAT(est.estimate, Catch::Matchers::WithinAbs(truth, 3.0 * est.std_error));
    }
}
