#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace perc {

// Axis-aligned analysis box [0,L]^d with a sampling margin around it. Point
// configurations are sampled on the padded box [-padding, L+padding]^d and
// statistics are read off the inner box, which suppresses boundary artifacts.
struct Window {
    int d = 2;
    double L = 1.0;
    double padding = 0.0;

    // A negative padding means "resolve automatically" (prepare_model replaces
    // it with the model's connection reach), so construction stays permissive;
    // every consumer of the box calls validate() before sampling from it.
    Window() = default;
    Window(int d_, double L_, double padding_ = 0.0) : d(d_), L(L_), padding(padding_) {}

    void validate() const {
        if (d < 2) throw std::invalid_argument("Window: dimension must be >= 2");
        if (!(L > 0.0)) throw std::invalid_argument("Window: side L must be > 0");
        if (padding < 0.0) throw std::invalid_argument("Window: padding must be >= 0");
    }

    double lo() const { return -padding; }
    double hi() const { return L + padding; }
    double side_padded() const { return L + 2.0 * padding; }

    double volume() const { return std::pow(L, d); }
    double volume_padded() const { return std::pow(side_padded(), d); }

    bool contains_padded(const double* x) const {
        for (int k = 0; k < d; ++k)
            if (x[k] < lo() || x[k] > hi()) return false;
        return true;
    }
};

// Finite point configuration; coordinates stored flat (x0,y0,...,x1,y1,...).
struct PointCloud {
    Window window;
    std::vector<double> coords;

    int dim() const { return window.d; }
    long long size() const { return static_cast<long long>(coords.size()) / window.d; }
    const double* pt(long long i) const { return coords.data() + i * window.d; }
    double* pt(long long i) { return coords.data() + i * window.d; }

    void push_back(const double* x) { coords.insert(coords.end(), x, x + window.d); }
    void push_back(double x, double y) { // planar convenience
        coords.push_back(x);
        coords.push_back(y);
    }
};

// Point configuration carrying one nonnegative mark per point (radius or power).
struct MarkedPointCloud {
    PointCloud base;
    std::vector<double> marks;

    long long size() const { return base.size(); }

    void validate() const {
        if (static_cast<long long>(marks.size()) != base.size())
            throw std::invalid_argument("MarkedPointCloud: marks.size() != point count");
        for (double m : marks)
            if (!(m >= 0.0)) throw std::invalid_argument("MarkedPointCloud: marks must be >= 0");
    }
};

inline double dist2(const double* a, const double* b, int d) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
        double t = a[k] - b[k];
        s += t * t;
    }
    return s;
}

inline double dist(const double* a, const double* b, int d) { return std::sqrt(dist2(a, b, d)); }

// Cube Q_a(c) = c + [-a/2, a/2]^d, the paper-style centered box.
inline bool in_centered_cube(const double* x, const double* center, double side, int d) {
    double h = side / 2.0;
    for (int k = 0; k < d; ++k)
        if (x[k] < center[k] - h || x[k] > center[k] + h) return false;
    return true;
}

} // namespace perc
