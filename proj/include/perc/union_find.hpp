#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace perc {

// Disjoint-set forest with path halving and union by size.
struct DisjointSetForest {
    std::vector<int> parent;
    std::vector<int> size;

    explicit DisjointSetForest(int n = 0) { reset(n); }

    void reset(int n) {
        parent.resize(n);
        std::iota(parent.begin(), parent.end(), 0);
        size.assign(n, 1);
    }

    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
        return true;
    }

    bool same(int a, int b) { return find(a) == find(b); }

    // Canonical component labels: each point gets the smallest point index in
    // its component, so labels are independent of union order.
    std::vector<int> canonical_labels() {
        const int n = static_cast<int>(parent.size());
        std::vector<int> smallest(n, -1);
        std::vector<int> label(n);
        for (int i = 0; i < n; ++i) {
            int r = find(i);
            if (smallest[r] < 0) smallest[r] = i;
        }
        for (int i = 0; i < n; ++i) label[i] = smallest[find(i)];
        return label;
    }
};

} // namespace perc
