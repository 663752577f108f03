#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "perc/quadrature.hpp"

namespace perc {

// Attenuation profiles. All kinds are nonincreasing, finite at 0, and carry the
// ambient dimension d (used by the cube-shift construction and the
// integrability check).
enum class PathLossKind {
    PowerLawOnePlus, // (1+r)^-p, strictly decreasing from 1
    MinPowerLaw,     // min(1, r^-p), flat on [0,1] then power decay
    CompactSupport,  // min(1, r^-p) cut to 0 at r >= r_max (jump at the cutoff)
    Table,           // piecewise-linear through sampled (r, value) pairs
};

struct IntegrabilityReport {
    double value = 0.0; // \int_0^inf r^{d-1} ell(r) dr when finite
    bool finite = true;
};

struct PathLoss {
    PathLossKind kind = PathLossKind::PowerLawOnePlus;
    int d = 2;
    double p = 4.0;                                          // exponent (power-law kinds)
    double r_max = std::numeric_limits<double>::infinity();  // support cutoff (CompactSupport)
    std::vector<double> table_r, table_v;                    // samples (Table kind)

    // Whether \int r^{d-1} ell dr converges, recorded when the factory runs.
    // Kept as a flag (not a construction failure) so that the divergent cases
    // can still be built and have their divergence detected downstream.
    bool integrable = true;

    static PathLoss power_law_one_plus(double p, int d = 2) {
        PathLoss pl;
        pl.kind = PathLossKind::PowerLawOnePlus;
        pl.p = p;
        pl.d = d;
        pl.validate();
        pl.integrable = (p > d);
        return pl;
    }
    static PathLoss min_power_law(double p, int d = 2) {
        PathLoss pl;
        pl.kind = PathLossKind::MinPowerLaw;
        pl.p = p;
        pl.d = d;
        pl.validate();
        pl.integrable = (p > d);
        return pl;
    }
    static PathLoss compact_support(double p, double r_max, int d = 2) {
        PathLoss pl;
        pl.kind = PathLossKind::CompactSupport;
        pl.p = p;
        pl.r_max = r_max;
        pl.d = d;
        pl.validate();
        return pl;
    }
    static PathLoss table(std::vector<double> r, std::vector<double> v, int d = 2) {
        PathLoss pl;
        pl.kind = PathLossKind::Table;
        pl.table_r = std::move(r);
        pl.table_v = std::move(v);
        pl.d = d;
        pl.validate();
        pl.integrable = (pl.table_v.back() == 0.0);
        return pl;
    }

    void validate() const {
        if (d < 1) throw std::invalid_argument("path_loss.d: must be >= 1");
        if (kind == PathLossKind::Table) {
            if (table_r.size() != table_v.size() || table_r.size() < 2)
                throw std::invalid_argument("path_loss.table: need >= 2 matching (r, value) samples");
            if (table_r.front() != 0.0)
                throw std::invalid_argument("path_loss.table: first sample must be at r = 0");
            for (size_t i = 0; i + 1 < table_r.size(); ++i)
                if (!(table_r[i] < table_r[i + 1]))
                    throw std::invalid_argument("path_loss.table: radii must be strictly increasing");
            for (size_t i = 0; i < table_v.size(); ++i) {
                if (!(table_v[i] >= 0.0))
                    throw std::invalid_argument("path_loss.table: values must be >= 0");
                if (i > 0 && table_v[i] > table_v[i - 1])
                    throw std::invalid_argument("path_loss.table: values must be nonincreasing");
            }
            if (!(table_v.front() > 0.0 && table_v.front() <= 1.0))
                throw std::invalid_argument("path_loss.table: value at 0 must be in (0, 1]");
            // Past the initial plateau the curve must fall strictly until (if
            // ever) it reaches 0; interior flats would break the inverse.
            bool past_plateau = false;
            for (size_t i = 1; i < table_v.size(); ++i) {
                if (!past_plateau && table_v[i] == table_v[0]) continue;
                past_plateau = true;
                if (table_v[i] == table_v[i - 1] && table_v[i] > 0.0)
                    throw std::invalid_argument(
                        "path_loss.table: values must decrease strictly past the plateau");
            }
        } else {
            if (!(p > 0.0)) throw std::invalid_argument("path_loss.p: must be > 0");
            if (kind == PathLossKind::CompactSupport && !(r_max > 0.0))
                throw std::invalid_argument("path_loss.r_max: must be > 0");
        }
    }

    double operator()(double r) const {
        if (!(r >= 0.0)) throw std::invalid_argument("path_loss: radius must be >= 0");
        switch (kind) {
            case PathLossKind::PowerLawOnePlus:
                return std::pow(1.0 + r, -p);
            case PathLossKind::MinPowerLaw:
                return r <= 1.0 ? 1.0 : std::pow(r, -p);
            case PathLossKind::CompactSupport:
                if (r >= r_max) return 0.0;
                return r <= 1.0 ? 1.0 : std::pow(r, -p);
            case PathLossKind::Table: {
                if (r >= table_r.back()) return table_v.back();
                auto it = std::upper_bound(table_r.begin(), table_r.end(), r);
                size_t j = static_cast<size_t>(it - table_r.begin()); // r < table_r[j]
                double t = (r - table_r[j - 1]) / (table_r[j] - table_r[j - 1]);
                return table_v[j - 1] + t * (table_v[j] - table_v[j - 1]);
            }
        }
        return 0.0;
    }

    double at_zero() const { return (*this)(0.0); }

    // End of the initial plateau: sup{ r : ell(r) = ell(0) }.
    double plateau_end() const {
        switch (kind) {
            case PathLossKind::PowerLawOnePlus:
                return 0.0;
            case PathLossKind::MinPowerLaw:
            case PathLossKind::CompactSupport:
                return std::min(1.0, r_max);
            case PathLossKind::Table: {
                double r = 0.0;
                for (size_t i = 1; i < table_v.size() && table_v[i] == table_v[0]; ++i) r = table_r[i];
                return r;
            }
        }
        return 0.0;
    }

    // Shifted profile used when bounding over cubes of side a: flat at ell(0)
    // within a*sqrt(d)/2, then the original curve moved out by that much.
    double shifted(double a, double r) const {
        if (!(a >= 0.0)) throw std::invalid_argument("path_loss.shifted: a must be >= 0");
        double s = 0.5 * a * std::sqrt(static_cast<double>(d));
        return r < s ? at_zero() : (*this)(r - s);
    }

    // Exact inverse on the decaying branch: the r with ell(r) = y. Throws when
    // no such r exists (y >= ell(0), y skipped by a jump, or never reached).
    double inverse(double y) const {
        double r = descend_to(y);
        if (std::abs((*this)(r) - y) > 1e-10 * y)
            throw std::range_error("path_loss.inverse: value not attained (ell jumps past y)");
        return r;
    }

    // sup{ r : ell(r) > y }, i.e. the radius of the region where the profile
    // still exceeds y; 0 when even ell(0) <= y. Unlike inverse(), a jump over y
    // resolves to the jump location (e.g. the compact-support cutoff).
    double exceed_radius(double y) const {
        double l0 = at_zero();
        if (y >= l0) return 0.0;
        return descend_to(y);
    }

    // \int_0^inf r^{d-1} ell(r) dr: the quantity controlling whether total
    // received power from a homogeneous cloud is finite.
    IntegrabilityReport integrability(double rel_tol = 1e-8) const {
        IntegrabilityReport rep;
        const double dd = static_cast<double>(d);
        bool diverges = false;
        switch (kind) {
            case PathLossKind::PowerLawOnePlus:
            case PathLossKind::MinPowerLaw:
                diverges = (p <= dd); // tail ~ r^{d-1-p}
                break;
            case PathLossKind::CompactSupport:
                break;
            case PathLossKind::Table:
                diverges = (table_v.back() > 0.0); // constant positive tail
                break;
        }
        if (diverges) {
            rep.finite = false;
            rep.value = std::numeric_limits<double>::infinity();
            return rep;
        }
        auto f = [this, dd](double r) { return std::pow(r, dd - 1.0) * (*this)(r); };
        if (kind == PathLossKind::CompactSupport) {
            double split = std::min(1.0, r_max);
            rep.value = adaptive_simpson(f, 0.0, split, rel_tol * 1e-2) +
                        adaptive_simpson(f, split, r_max, rel_tol * 1e-2);
            return rep;
        }
        if (kind == PathLossKind::Table) {
            double sum = 0.0;
            for (size_t i = 0; i + 1 < table_r.size(); ++i)
                sum += adaptive_simpson(f, table_r[i], table_r[i + 1], rel_tol * 1e-3);
            rep.value = sum;
            return rep;
        }
        TailQuadResult q = integrate_halfline(f, rel_tol);
        if (!q.converged) {
            rep.finite = false;
            rep.value = std::numeric_limits<double>::infinity();
            return rep;
        }
        rep.value = q.value;
        return rep;
    }

  private:
    // Smallest r with ell(r) <= y (equals sup{ell > y} since ell is
    // nonincreasing), found by bracketing + bisection.
    double descend_to(double y) const {
        if (!(y > 0.0))
            throw std::invalid_argument("path_loss: target value must be > 0");
        if (y >= at_zero())
            throw std::invalid_argument("path_loss: target value must be < ell(0)");
        double lo = 0.0, hi = 1.0;
        while ((*this)(hi) > y) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e30)
                throw std::range_error("path_loss: value not attained (ell stays above target)");
        }
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            double mid = 0.5 * (lo + hi);
            if ((*this)(mid) > y)
                lo = mid;
            else
                hi = mid;
        }
        return hi;
    }
};

} // namespace perc
