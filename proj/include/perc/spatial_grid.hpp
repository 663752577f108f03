#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "perc/geometry.hpp"

namespace perc {

// Uniform bucket grid for fixed-radius neighbor search. With cell size >= the
// query radius, scanning the 3^d cell neighborhood of a point is exhaustive, so
// graph builders using it are exact (no false negatives vs. all-pairs).
struct UniformGrid {
    int d = 2;
    double cell = 1.0;
    std::vector<double> lo;      // grid origin per axis
    std::vector<int> shape;      // cells per axis
    std::vector<int> start;      // CSR bucket offsets (size ncells+1)
    std::vector<int> items;      // point indices bucket-major

    static constexpr long long max_cells = 1LL << 22;

    void build(const std::vector<double>& coords, int dim, double cell_size) {
        d = dim;
        const long long n = static_cast<long long>(coords.size()) / d;
        lo.assign(d, 0.0);
        std::vector<double> hi(d, 0.0);
        if (n > 0) {
            for (int k = 0; k < d; ++k) lo[k] = hi[k] = coords[k];
            for (long long i = 0; i < n; ++i)
                for (int k = 0; k < d; ++k) {
                    lo[k] = std::min(lo[k], coords[i * d + k]);
                    hi[k] = std::max(hi[k], coords[i * d + k]);
                }
        }
        // Grow the cell if the grid would get too large; exactness only needs
        // cell >= radius, a bigger cell just means more candidates.
        cell = std::max(cell_size, 1e-12);
        for (;;) {
            long long total = 1;
            bool ok = true;
            for (int k = 0; k < d; ++k) {
                long long nk = static_cast<long long>(std::floor((hi[k] - lo[k]) / cell)) + 1;
                nk = std::max<long long>(nk, 1);
                if (nk > max_cells / std::max(total, 1LL)) {
                    ok = false;
                    break;
                }
                total *= nk;
            }
            if (ok && total <= max_cells) break;
            cell *= 2.0;
        }
        shape.assign(d, 1);
        long long ncells = 1;
        for (int k = 0; k < d; ++k) {
            shape[k] = static_cast<int>(std::floor((hi[k] - lo[k]) / cell)) + 1;
            ncells *= shape[k];
        }
        start.assign(ncells + 1, 0);
        items.resize(n);
        std::vector<int> idx(n);
        for (long long i = 0; i < n; ++i) {
            idx[i] = static_cast<int>(flat_index(&coords[i * d]));
            ++start[idx[i] + 1];
        }
        for (long long c = 0; c < ncells; ++c) start[c + 1] += start[c];
        std::vector<int> cursor(start.begin(), start.end() - 1);
        for (long long i = 0; i < n; ++i) items[cursor[idx[i]]++] = static_cast<int>(i);
    }

    long long flat_index(const double* x) const {
        long long f = 0;
        for (int k = 0; k < d; ++k) {
            int c = static_cast<int>(std::floor((x[k] - lo[k]) / cell));
            c = std::clamp(c, 0, shape[k] - 1);
            f = f * shape[k] + c;
        }
        return f;
    }

    // Visit all points in the 3^d cells around x (including x's own cell).
    template <class F>
    void for_candidates(const double* x, F&& visit) const {
        std::vector<int> base(d), off(d, -1);
        for (int k = 0; k < d; ++k) {
            int c = static_cast<int>(std::floor((x[k] - lo[k]) / cell));
            base[k] = std::clamp(c, 0, shape[k] - 1);
        }
        for (;;) {
            bool in_range = true;
            long long f = 0;
            for (int k = 0; k < d; ++k) {
                int c = base[k] + off[k];
                if (c < 0 || c >= shape[k]) {
                    in_range = false;
                    break;
                }
                f = f * shape[k] + c;
            }
            if (in_range)
                for (int t = start[f]; t < start[f + 1]; ++t) visit(items[t]);
            // odometer over {-1,0,1}^d
            int k = d - 1;
            while (k >= 0) {
                if (++off[k] <= 1) break;
                off[k] = -1;
                --k;
            }
            if (k < 0) break;
        }
    }
};

} // namespace perc
