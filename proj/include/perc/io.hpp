#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "perc/classify.hpp"
#include "perc/geometry.hpp"
#include "perc/lattice.hpp"
#include "perc/segment_system.hpp"
#include "perc/spatial_graph.hpp"

namespace perc {

// one emitted estimate; axis records which parameter varied ("-" for plain runs)
struct ResultRow {
    std::string model;
    std::string axis = "-";
    double axis_value = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    long long reps = 0;
    std::uint64_t seed = 0;
    std::string config_hash;
};

// 17 significant digits: doubles survive a text round trip exactly
inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline const char* results_csv_header() {
    return "model,axis,axis_value,estimate,stderr,reps,seed,config_hash";
}

inline std::string results_csv_line(const ResultRow& r) {
    std::string s;
    s += r.model;
    s += ',';
    s += r.axis;
    s += ',';
    s += format_g17(r.axis_value);
    s += ',';
    s += format_g17(r.estimate);
    s += ',';
    s += format_g17(r.std_error);
    s += ',';
    s += std::to_string(r.reps);
    s += ',';
    s += std::to_string(r.seed);
    s += ',';
    s += r.config_hash;
    return s;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary); // binary: byte-identical across platforms
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

inline void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    std::string s = results_csv_header();
    s += '\n';
    for (const ResultRow& r : rows) {
        s += results_csv_line(r);
        s += '\n';
    }
    write_text_file(path, s);
}

// segment system as x1,y1,x2,y2 rows
inline void write_segments_csv(const std::string& path, const SegmentSystem& sys) {
    std::string s = "x1,y1,x2,y2\n";
    for (const Segment& seg : sys.segments) {
        s += format_g17(seg.x1);
        s += ',';
        s += format_g17(seg.y1);
        s += ',';
        s += format_g17(seg.x2);
        s += ',';
        s += format_g17(seg.y2);
        s += '\n';
    }
    write_text_file(path, s);
}

// graph as an edge list plus per-point component labels
inline void write_graph_csv(const std::string& edges_path, const std::string& labels_path,
                            const SpatialGraph& g) {
    std::string e = "i,j\n";
    for (const auto& [i, j] : g.edges) {
        e += std::to_string(i);
        e += ',';
        e += std::to_string(j);
        e += '\n';
    }
    write_text_file(edges_path, e);
    std::string l = "point,component\n";
    for (size_t t = 0; t < g.labels.size(); ++t) {
        l += std::to_string(t);
        l += ',';
        l += std::to_string(g.labels[t]);
        l += '\n';
    }
    write_text_file(labels_path, l);
}

// site classification as site coordinates + flags
inline void write_classification_csv(const std::string& path, const SiteClassification& sc) {
    std::string s;
    for (int k = 0; k < sc.d; ++k) {
        s += 'z';
        s += std::to_string(k);
        s += ',';
    }
    s += "flag,boundary\n";
    std::vector<long long> z;
    for (long long f = 0; f < sc.sites(); ++f) {
        sc.coords(f, z);
        for (int k = 0; k < sc.d; ++k) {
            s += std::to_string(z[static_cast<size_t>(k)]);
            s += ',';
        }
        s += std::to_string(static_cast<int>(sc.flag[static_cast<size_t>(f)]));
        s += ',';
        s += std::to_string(static_cast<int>(sc.boundary[static_cast<size_t>(f)]));
        s += '\n';
    }
    write_text_file(path, s);
}

// triangular site lattice as axial coordinates + open flag
inline void write_tri_lattice_csv(const std::string& path, const TriangularSiteLattice& lat) {
    std::string s = "q,r,open,valid\n";
    for (int q = 0; q < lat.nq; ++q)
        for (int r = 0; r < lat.nr; ++r) {
            s += std::to_string(q);
            s += ',';
            s += std::to_string(r);
            s += ',';
            s += std::to_string(static_cast<int>(lat.is_open(q, r)));
            s += ',';
            s += std::to_string(static_cast<int>(lat.is_valid(q, r)));
            s += '\n';
        }
    write_text_file(path, s);
}

} // namespace perc
