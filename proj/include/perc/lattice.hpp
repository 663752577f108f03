#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "perc/rng.hpp"
#include "perc/union_find.hpp"

namespace perc {

// Bond configuration on the d-dimensional integer box {0..n-1}^d. Each site
// owns one flag per positive axis direction (the bond to its +axis neighbor),
// giving d * n^d canonically indexed flags: flag[site_flat * d + axis].
// Flags for bonds leaving the box exist but are never traversed.
struct BondLattice {
    int d = 2;
    int n = 8;
    double p = 0.5;
    std::vector<char> open_flags;

    long long sites() const {
        long long s = 1;
        for (int k = 0; k < d; ++k) s *= n;
        return s;
    }

    long long site_flat(const std::vector<int>& c) const {
        long long f = 0;
        for (int k = d - 1; k >= 0; --k) f = f * n + c[k];
        return f;
    }

    void site_coords(long long flat, std::vector<int>& c) const {
        c.resize(d);
        for (int k = 0; k < d; ++k) {
            c[k] = static_cast<int>(flat % n);
            flat /= n;
        }
    }

    bool bond_open(long long site, int axis) const {
        return open_flags[static_cast<size_t>(site * d + axis)] != 0;
    }
};

// Uniform draws per bond in canonical flag order; thresholding the same draws
// at increasing p only ever opens more bonds, which is the coupling the
// monotonicity properties are stated through.
inline std::vector<double> sample_bond_uniforms(int d, int n, RngStream& rng) {
    if (d < 1 || n < 1) throw std::invalid_argument("bond_lattice: need d >= 1, n >= 1");
    long long count = d;
    for (int k = 0; k < d; ++k) count *= n;
    std::vector<double> u(static_cast<size_t>(count));
    for (auto& v : u) v = rng.uniform();
    return u;
}

inline BondLattice bond_lattice_from_uniforms(const std::vector<double>& uniforms, int d, int n,
                                              double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bond_lattice.p: must be in [0,1]");
    BondLattice lat;
    lat.d = d;
    lat.n = n;
    lat.p = p;
    lat.open_flags.resize(uniforms.size());
    for (size_t i = 0; i < uniforms.size(); ++i) lat.open_flags[i] = uniforms[i] < p ? 1 : 0;
    return lat;
}

inline BondLattice sample_bond_lattice(int d, int n, double p, RngStream& rng) {
    return bond_lattice_from_uniforms(sample_bond_uniforms(d, n, rng), d, n, p);
}

// Breadth-first closure of the center site through open bonds. stop_above >= 0
// cuts the search as soon as the cluster exceeds that many sites (the caller
// only wanted to know whether it does).
inline std::vector<long long> origin_cluster(const BondLattice& lat, long long stop_above = -1) {
    std::vector<int> c(static_cast<size_t>(lat.d), lat.n / 2);
    long long start = lat.site_flat(c);
    std::vector<char> seen(static_cast<size_t>(lat.sites()), 0);
    std::vector<long long> cluster;
    std::deque<long long> frontier{start};
    seen[static_cast<size_t>(start)] = 1;
    std::vector<int> cc;
    while (!frontier.empty()) {
        long long s = frontier.front();
        frontier.pop_front();
        cluster.push_back(s);
        if (stop_above >= 0 && static_cast<long long>(cluster.size()) > stop_above) return cluster;
        lat.site_coords(s, cc);
        long long stride = 1;
        for (int k = 0; k < lat.d; ++k) {
            if (cc[k] + 1 < lat.n && lat.bond_open(s, k) && !seen[static_cast<size_t>(s + stride)]) {
                seen[static_cast<size_t>(s + stride)] = 1;
                frontier.push_back(s + stride);
            }
            if (cc[k] > 0 && lat.bond_open(s - stride, k) && !seen[static_cast<size_t>(s - stride)]) {
                seen[static_cast<size_t>(s - stride)] = 1;
                frontier.push_back(s - stride);
            }
            stride *= lat.n;
        }
    }
    return cluster;
}

// Cluster of the origin on the unbounded lattice, growing bonds on demand.
// Each bond's state is drawn once, the first time the search touches it, so a
// subcritical probe costs on the order of the cluster it finds instead of a
// whole-box sample. Returns the cluster size, capped at stop_above + 1.
inline long long origin_cluster_size_unbounded(int d, double p, RngStream& rng,
                                               long long stop_above) {
    if (d < 1 || d > 4) throw std::invalid_argument("origin_cluster: d must be in 1..4");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("origin_cluster: p must be in [0, 1]");
    if (stop_above < 0) throw std::invalid_argument("origin_cluster: stop_above must be >= 0");
    // pack a site's coordinates (|c| stays below the cap, well inside 14 bits)
    // plus a bond axis into one key
    auto site_key = [d](const std::array<int, 4>& c) {
        std::uint64_t k = 0;
        for (int i = 0; i < d; ++i) k = (k << 15) | static_cast<std::uint64_t>(c[i] + (1 << 14));
        return k;
    };
    std::unordered_map<std::uint64_t, bool> bond_state;
    std::unordered_set<std::uint64_t> seen;
    std::deque<std::array<int, 4>> frontier;
    std::array<int, 4> origin{};
    frontier.push_back(origin);
    seen.insert(site_key(origin));
    long long count = 0;
    while (!frontier.empty()) {
        std::array<int, 4> c = frontier.front();
        frontier.pop_front();
        if (++count > stop_above) return count;
        for (int k = 0; k < d; ++k) {
            for (int dir = -1; dir <= 1; dir += 2) {
                std::array<int, 4> nb = c;
                nb[k] += dir;
                // the bond's canonical owner is its lower endpoint along axis k
                std::uint64_t bkey = (site_key(dir > 0 ? c : nb) << 2) |
                                     static_cast<std::uint64_t>(k);
                auto it = bond_state.find(bkey);
                bool open;
                if (it == bond_state.end()) {
                    open = rng.bernoulli(p);
                    bond_state.emplace(bkey, open);
                } else {
                    open = it->second;
                }
                if (open && seen.insert(site_key(nb)).second) frontier.push_back(nb);
            }
        }
    }
    return count;
}

// Whether some open-bond cluster joins the axis-low face to the axis-high face.
inline bool bond_crossing(const BondLattice& lat, int axis = 0) {
    if (axis < 0 || axis >= lat.d) throw std::invalid_argument("bond_crossing: axis out of range");
    const long long ns = lat.sites();
    DisjointSetForest dsf;
    dsf.reset(static_cast<int>(ns));
    std::vector<int> cc;
    for (long long s = 0; s < ns; ++s) {
        lat.site_coords(s, cc);
        long long stride = 1;
        for (int k = 0; k < lat.d; ++k) {
            if (cc[k] + 1 < lat.n && lat.bond_open(s, k))
                dsf.unite(static_cast<int>(s), static_cast<int>(s + stride));
            stride *= lat.n;
        }
    }
    std::vector<char> lo(static_cast<size_t>(ns), 0), hi(static_cast<size_t>(ns), 0);
    std::vector<int> c;
    for (long long s = 0; s < ns; ++s) {
        lat.site_coords(s, c);
        int root = dsf.find(static_cast<int>(s));
        if (c[axis] == 0) lo[root] = 1;
        if (c[axis] == lat.n - 1) hi[root] = 1;
    }
    for (long long s = 0; s < ns; ++s)
        if (lo[static_cast<size_t>(s)] && hi[static_cast<size_t>(s)]) return true;
    return false;
}

// Site configuration on an nq x nr patch of the triangular lattice in axial
// coordinates: site (q, r) is adjacent to (q+-1, r), (q, r+-1), (q+1, r-1) and
// (q-1, r+1), so every interior site has exactly 6 neighbors. An optional
// validity mask restricts which sites exist at all (used by the hexagon
// coarse-graining, where only fully sampled hexagons count).
struct TriangularSiteLattice {
    int nq = 8;
    int nr = 8;
    double p = 0.5;
    std::vector<char> open_flags; // nq * nr, index q * nr + r
    std::vector<char> valid;      // empty = all sites valid

    long long sites() const { return static_cast<long long>(nq) * nr; }
    long long idx(int q, int r) const { return static_cast<long long>(q) * nr + r; }
    bool in_range(int q, int r) const { return q >= 0 && q < nq && r >= 0 && r < nr; }
    bool is_valid(int q, int r) const {
        return in_range(q, r) && (valid.empty() || valid[static_cast<size_t>(idx(q, r))] != 0);
    }
    // Openness is independent of the validity mask: the mask only marks which
    // sites enter statistics, while connectivity runs over all open sites.
    bool is_open(int q, int r) const {
        return in_range(q, r) && open_flags[static_cast<size_t>(idx(q, r))] != 0;
    }

    static constexpr int neighbor_dq[6] = {1, -1, 0, 0, 1, -1};
    static constexpr int neighbor_dr[6] = {0, 0, 1, -1, -1, 1};
};

inline std::vector<double> sample_tri_uniforms(int nq, int nr, RngStream& rng) {
    if (nq < 1 || nr < 1) throw std::invalid_argument("tri_lattice: need nq >= 1, nr >= 1");
    std::vector<double> u(static_cast<size_t>(nq) * nr);
    for (auto& v : u) v = rng.uniform();
    return u;
}

inline TriangularSiteLattice tri_lattice_from_uniforms(const std::vector<double>& uniforms, int nq,
                                                       int nr, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("tri_lattice.p: must be in [0,1]");
    TriangularSiteLattice lat;
    lat.nq = nq;
    lat.nr = nr;
    lat.p = p;
    lat.open_flags.resize(uniforms.size());
    for (size_t i = 0; i < uniforms.size(); ++i) lat.open_flags[i] = uniforms[i] < p ? 1 : 0;
    return lat;
}

inline TriangularSiteLattice sample_tri_lattice(int nq, int nr, double p, RngStream& rng) {
    return tri_lattice_from_uniforms(sample_tri_uniforms(nq, nr, rng), nq, nr, p);
}

// Component labels over open sites (-1 for closed/invalid); label = smallest
// flat index in the component.
inline std::vector<int> tri_components(const TriangularSiteLattice& lat) {
    DisjointSetForest dsf;
    dsf.reset(static_cast<int>(lat.sites()));
    for (int q = 0; q < lat.nq; ++q)
        for (int r = 0; r < lat.nr; ++r) {
            if (!lat.is_open(q, r)) continue;
            for (int k = 0; k < 6; ++k) {
                int q2 = q + TriangularSiteLattice::neighbor_dq[k];
                int r2 = r + TriangularSiteLattice::neighbor_dr[k];
                if (lat.is_open(q2, r2))
                    dsf.unite(static_cast<int>(lat.idx(q, r)), static_cast<int>(lat.idx(q2, r2)));
            }
        }
    std::vector<int> labels = dsf.canonical_labels();
    for (int q = 0; q < lat.nq; ++q)
        for (int r = 0; r < lat.nr; ++r)
            if (!lat.is_open(q, r)) labels[static_cast<size_t>(lat.idx(q, r))] = -1;
    return labels;
}

// Left-right crossing: some open component touches both the lowest and the
// highest q-column that contains any valid site.
inline bool tri_crossing(const TriangularSiteLattice& lat) {
    int q_lo = -1, q_hi = -1;
    for (int q = 0; q < lat.nq; ++q)
        for (int r = 0; r < lat.nr; ++r)
            if (lat.is_valid(q, r)) {
                if (q_lo < 0) q_lo = q;
                q_hi = q;
                break;
            }
    if (q_lo < 0) return false;
    std::vector<int> labels = tri_components(lat);
    std::vector<char> lo(static_cast<size_t>(lat.sites()), 0), hi(static_cast<size_t>(lat.sites()), 0);
    for (int q = 0; q < lat.nq; ++q)
        for (int r = 0; r < lat.nr; ++r) {
            int lab = labels[static_cast<size_t>(lat.idx(q, r))];
            if (lab < 0) continue;
            if (q == q_lo) lo[lab] = 1;
            if (q == q_hi) hi[lab] = 1;
        }
    for (long long s = 0; s < lat.sites(); ++s)
        if (lo[static_cast<size_t>(s)] && hi[static_cast<size_t>(s)]) return true;
    return false;
}

// Fraction of valid sites that are open (the quantity with the closed-form
// mean p_s under the hexagon coarse-graining).
inline double open_fraction(const TriangularSiteLattice& lat, long long* valid_count = nullptr) {
    long long nvalid = 0, nopen = 0;
    for (int q = 0; q < lat.nq; ++q)
        for (int r = 0; r < lat.nr; ++r) {
            if (!lat.is_valid(q, r)) continue;
            ++nvalid;
            if (lat.is_open(q, r)) ++nopen;
        }
    if (valid_count) *valid_count = nvalid;
    return nvalid == 0 ? 0.0 : static_cast<double>(nopen) / static_cast<double>(nvalid);
}

} // namespace perc
