#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "perc/mark_distribution.hpp"
#include "perc/path_loss.hpp"
#include "perc/quadrature.hpp"

namespace perc {

inline double unit_ball_volume(int d) {
    if (d < 1) throw std::invalid_argument("unit_ball_volume: d must be >= 1");
    return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

// Path-counting bound on a bond cluster reaching graph distance n from the
// origin: at most (2d)^n self-avoiding directions, each path open with
// probability p^n. Vacuous at p = 1/(2d), decaying below it.
inline double saw_subcritical_bound(double p, int d, long long n) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("saw_bound.p: must be in [0,1]");
    if (d < 1 || n < 0) throw std::invalid_argument("saw_bound: need d >= 1, n >= 0");
    return std::pow(2.0 * d * p, static_cast<double>(n));
}

// Contour-counting bound on the probability that the origin's open cluster is
// enclosed by a blocking circuit on the planar dual: sum of (4(1-p))^{2n+4}
// over circuit sizes. The sum index starts at n = 1 by default; from_zero
// includes the length-4 minimal-circuit term as well.
inline double peierls_supercritical_bound(double p, bool from_zero = false) {
    if (!(p > 0.75 && p <= 1.0))
        throw std::invalid_argument("peierls_bound.p: must be in (3/4, 1] for the series to sum");
    const double q = 4.0 * (1.0 - p);
    const double ratio = q * q;
    double first = from_zero ? std::pow(q, 4) : std::pow(q, 6);
    return first / (1.0 - ratio);
}

// Rigorous two-sided bracket for the critical intensity of the planar
// radius-1 overlap model, from the hexagon coarse-graining argument:
// (2 ln 2 / (3 sqrt 3), 26 ln 2 / (3 sqrt 3)). The ratio is exactly 13.
inline std::pair<double, double> hexagon_threshold_interval() {
    const double base = std::numbers::ln2 / (3.0 * std::numbers::sqrt3);
    return {2.0 * base, 26.0 * base};
}

struct BranchingBound {
    double lambda0 = 0.0; // intensities below this are guaranteed subcritical
    double C = 0.0;       // 2^{d+1} * unit ball volume
    double moment = 0.0;  // E[ceil(rho)^{2d-1}]
};

// Subcritical intensity from comparing the overlap cluster to a multitype
// branching process over integerized radii: lambda0 = 1 / (C * E[ceil(rho)^{2d-1}]).
// Throws when the required moment diverges.
inline BranchingBound branching_subcritical_bound(const MarkDistribution& dist, int d) {
    BranchingBound out;
    out.C = std::pow(2.0, d + 1) * unit_ball_volume(d);
    out.moment = dist.ceil_moment(2 * d - 1);
    out.lambda0 = 1.0 / (out.C * out.moment);
    return out;
}

// Mean offspring count of the comparison branching process: expected number
// of integer-radius-j points whose ball overlaps a given radius-i ball,
// mu_{i,j} = lambda * P(ceil(rho)=j) * pi_d * ((i+j)^d - max(0, i-j)^d).
inline double branching_matrix_entry(const MarkDistribution& dist, int d, double lambda,
                                     long long i, long long j) {
    if (i < 0 || j < 0) throw std::invalid_argument("branching_matrix_entry: need i, j >= 0");
    double shell = std::pow(static_cast<double>(i + j), d) -
                   std::pow(static_cast<double>(std::max<long long>(0, i - j)), d);
    return lambda * dist.ceil_pmf(j) * unit_ball_volume(d) * shell;
}

struct K0Result {
    double K0 = 0.0;
    double tail_fraction = 0.0; // estimated truncated remainder relative to the sum
};

// Uniform bound on the lattice sum of the cube-shifted profile,
// sup_x sum_{z in Z^d} ell_{6n}(|nz - x|) <= K0. Ring r of sites around the
// site nearest to x contributes at most ((2r+1)^d - (2r-1)^d) terms, each at
// distance >= n(r - 1/2), so summing the shifted profile over rings majorizes
// the sup. Rings are added in doubling blocks until the geometric estimate of
// the remainder drops below rel_tail of the running sum.
inline K0Result interference_k0(const PathLoss& ell, long long n = 1, double rel_tail = 1e-9) {
    if (n < 1) throw std::invalid_argument("interference_k0: n must be >= 1");
    if (!ell.integrable)
        throw std::runtime_error(
            "interference_k0: path loss is not integrable in dimension d; the lattice sum diverges");
    const int d = ell.d;
    const double shift = 3.0 * std::sqrt(static_cast<double>(d));
    auto ring_count = [d](long long r) {
        return r == 0 ? 1.0
                      : std::pow(2.0 * r + 1.0, d) - std::pow(2.0 * r - 1.0, d);
    };
    auto term = [&](long long r) {
        double u = std::max(0.0, r - 0.5); // Chebyshev minorant of |nz - x| / n
        double v = u < shift ? ell.at_zero() : ell(static_cast<double>(n) * (u - shift));
        return ring_count(r) * v;
    };

    K0Result out;
    // Plateau rings: every ring with u < shift contributes ell(0) per site.
    long long r = 0;
    while (std::max(0.0, r - 0.5) < shift) out.K0 += term(r++);

    double prev_block = std::numeric_limits<double>::infinity();
    long long block_len = std::max<long long>(r, 4);
    int stalled = 0;
    for (int doubling = 0; doubling < 60; ++doubling) {
        double block = 0.0;
        for (long long k = 0; k < block_len; ++k) block += term(r++);
        out.K0 += block;
        double ratio = block / prev_block;
        if (std::isfinite(prev_block) && ratio < 0.999) {
            stalled = 0;
            double remainder = block * ratio / (1.0 - ratio);
            if (remainder <= rel_tail * out.K0) {
                out.tail_fraction = remainder / out.K0;
                return out;
            }
        } else if (++stalled >= 8) {
            break;
        }
        prev_block = block;
        block_len *= 2;
    }
    throw std::runtime_error("interference_k0: ring sum failed to converge (divergent tail)");
}

// Half the noise-only connection distance of a transmitter at power level r:
// delta = ell^{-1}(N0 tau / r) / 2, using the jump-resolving inverse.
inline double delta_half_distance(const PathLoss& ell, double N0, double tau, double r_power) {
    if (!(N0 > 0.0 && tau > 0.0)) throw std::invalid_argument("delta: need N0 > 0, tau > 0");
    double y = N0 * tau / r_power;
    if (!(r_power > 0.0) || y > ell.at_zero())
        throw std::invalid_argument("delta: power level infeasible, need r >= N0*tau/ell(0)");
    return ell.exceed_radius(y) / 2.0;
}

// Interference level below which every noise-only link at distance <= 2*delta
// survives cancellation, when each receiver hears at most M units of
// interference: gamma* = (N0 / M) * (ell(delta)/ell(2 delta) - 1).
inline double gamma_star_bound(const PathLoss& ell, double N0, double tau, double M,
                               double r_power) {
    if (!(M > 0.0)) throw std::invalid_argument("gamma_star.M: must be > 0");
    double delta = delta_half_distance(ell, N0, tau, r_power);
    return (N0 / M) * (ell(delta) / ell(2.0 * delta) - 1.0);
}

// Constant-power analogue on the plateau-free branch: for a target link
// distance r strictly between the plateau end and the noise-only radius r_B,
// gamma' = (N0 / (P M)) * (ell(r)/ell(r_B) - 1) > 0.
inline double gamma_prime_bound(const PathLoss& ell, double N0, double tau, double P, double M,
                                double r_dist) {
    if (!(N0 > 0.0 && tau > 0.0 && P > 0.0 && M > 0.0))
        throw std::invalid_argument("gamma_prime: need N0, tau, P, M > 0");
    double y = tau * N0 / P;
    if (y >= ell.at_zero())
        throw std::invalid_argument("gamma_prime: need ell(0) > tau*N0/P");
    double r_B = ell.exceed_radius(y);
    if (!(ell.plateau_end() < r_dist && r_dist < r_B))
        throw std::invalid_argument("gamma_prime.r: need plateau end < r < r_B");
    return (N0 / (P * M)) * (ell(r_dist) / ell(r_B) - 1.0);
}

struct InterferenceParams {
    double N0 = 1.0;
    double tau = 1.0;
    double P = 1.0;
    double M = 1.0;
    double r = 1.0; // link distance for gamma', power level for delta/gamma*
};

struct InterferenceConstants {
    K0Result k0;
    double r_B = 0.0;
    double gamma_prime = 0.0;
    double gamma_star = 0.0;
    double delta = 0.0;
};

// All interference constants in one call. The single r parameter is read as a
// link distance by gamma' and as a power level by delta/gamma*; any
// infeasibility throws (callers wanting partial results use the individual
// functions).
inline InterferenceConstants interference_constants(const PathLoss& ell, long long n,
                                                    const InterferenceParams& par) {
    InterferenceConstants out;
    out.k0 = interference_k0(ell, n);
    out.r_B = ell.exceed_radius(par.tau * par.N0 / par.P);
    out.gamma_prime = gamma_prime_bound(ell, par.N0, par.tau, par.P, par.M, par.r);
    out.delta = delta_half_distance(ell, par.N0, par.tau, par.r);
    out.gamma_star = gamma_star_bound(ell, par.N0, par.tau, par.M, par.r);
    return out;
}

struct ThetaMomentCheck {
    double value = 0.0; // E[mu^{2d-1}] where mu is the noise-only reach of a random-power point
    bool finite = true;
    bool alpha_beta_ok = false; // tail exponents satisfy alpha*beta > 2d-1
    std::string note;
};

// Layer-cake evaluation of E[mu^{2d-1}] = int_0^inf P(rho > tau*N0 / ell(t^{1/(2d-1)})) dt,
// with mu the radius convention of snr_radius (jumps resolve downward, so the
// integrand is 0 wherever ell vanishes). Divergence is a reported outcome.
inline ThetaMomentCheck theta_moment_check(const PathLoss& ell, const MarkDistribution& dist,
                                           int d, double tau, double N0) {
    if (!(tau > 0.0 && N0 > 0.0))
        throw std::invalid_argument("theta_moment_check: need tau > 0, N0 > 0");
    ThetaMomentCheck out;
    const double m = 2.0 * d - 1.0;
    auto integrand = [&](double t) {
        double lv = ell(std::pow(t, 1.0 / m));
        if (!(lv > 0.0)) return 0.0;
        return dist.tail(tau * N0 / lv);
    };

    // Sufficient-condition flag from the tail exponents: ell(r) <= r^-beta and
    // P(rho > r) <= r^-alpha with alpha*beta > 2d-1. Bounded quantities count
    // as exponent infinity.
    const double inf = std::numeric_limits<double>::infinity();
    double alpha = dist.max_value() < inf ? inf
                   : dist.kind == MarkKind::ParetoTail ? dist.a
                                                       : inf; // geometric-like tails beat any power
    double beta = 0.0;
    switch (ell.kind) {
        case PathLossKind::PowerLawOnePlus:
        case PathLossKind::MinPowerLaw: beta = ell.p; break;
        case PathLossKind::CompactSupport: beta = inf; break;
        case PathLossKind::Table: beta = ell.table_v.back() == 0.0 ? inf : 0.0; break;
    }
    out.alpha_beta_ok = alpha * beta > m; // inf * positive = inf in IEEE arithmetic

    if (ell.kind == PathLossKind::CompactSupport ||
        (ell.kind == PathLossKind::Table && ell.table_v.back() == 0.0)) {
        double support = ell.kind == PathLossKind::CompactSupport ? ell.r_max : ell.table_r.back();
        out.value = adaptive_simpson(integrand, 0.0, std::pow(support, m), 1e-9);
        out.note = "finite (compact support)";
        return out;
    }
    if (dist.max_value() < inf) {
        double y = tau * N0 / dist.max_value();
        double reach = y >= ell.at_zero() ? 0.0 : ell.exceed_radius(y);
        out.value = reach > 0.0 ? adaptive_simpson(integrand, 0.0, std::pow(reach, m), 1e-9) : 0.0;
        out.note = "finite (bounded power)";
        return out;
    }
    TailQuadResult q = integrate_halfline(integrand, 1e-8);
    if (!q.converged) {
        out.finite = false;
        out.value = inf;
        out.note = "divergent (integrand tail not decaying)";
        return out;
    }
    out.value = q.value;
    out.note = "finite";
    return out;
}

// Bias from cutting the interference sum at the sampling padding: a
// homogeneous cloud outside radius `pad` contributes at most
// lambda * d * pi_d * int_pad^inf r^{d-1} ell(r) dr in expectation.
inline double truncation_bias(const PathLoss& ell, double lambda, double pad) {
    if (!(lambda >= 0.0 && pad >= 0.0))
        throw std::invalid_argument("truncation_bias: need lambda >= 0, pad >= 0");
    if (!ell.integrable) return std::numeric_limits<double>::infinity();
    const int d = ell.d;
    auto f = [&](double u) { return std::pow(pad + u, d - 1.0) * ell(pad + u); };
    TailQuadResult q = integrate_halfline(f, 1e-8);
    if (!q.converged) return std::numeric_limits<double>::infinity();
    return lambda * d * unit_ball_volume(d) * q.value;
}

} // namespace perc
