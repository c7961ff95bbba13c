#pragma once

#include <optional>
#include <vector>

#include "lipext/ifs_system.hpp"
#include "lipext/word.hpp"

namespace lipext {

// Representative f_w(anchor) of E_w; within d_w of every point of E_w.
Point address_to_point(const IfsSystem& system, const Word& w);

// Word of length `depth` whose cylinder contains x (up to tol). Strong separation only.
Word point_to_address(const IfsSystem& system, const Point& x, int depth, double tol = kTolGeom);

// Shortest prefix i of `address` with L d_i <= B. When C is given, also certifies
// d_i >= B / (C L) for nonempty i (throws CertificationError otherwise).
// Throws InsufficientDepth when no prefix qualifies.
Word shortest_index(const IfsSystem& system, const Word& address, double L, double B,
                    std::optional<double> C = std::nullopt);
Word shortest_index(const IfsSystem& system, const InfiniteWord& address, double L, double B,
                    std::optional<double> C = std::nullopt);

struct Partition {
    Antichain cut;
    double c2 = 0.0; // smallest piece diameter
};

// Greedy tree cut of exactly m words: repeatedly split the largest cylinder, ties by
// lexicographic order. Words are returned sorted. Requires exactly two generators.
Partition binary_partition(const IfsSystem& system, std::size_t m);

// Maximal words j with e_j < delta whose cylinder meets one of `points`.
std::vector<Word> maximal_cylinders_meeting(const IfsSystem& system, const std::vector<Point>& points, double delta,
                                            double tol = kTolGeom);

// First word along each branch below `root` with diameter <= delta/2, in lexicographic order.
std::vector<Word> diameter_cut(const IfsSystem& system, const Word& root, double delta);

// A delta-dense net of the subset: representatives of its diameter cut.
struct Net {
    std::vector<Word> words;
    std::vector<Point> points;
    double mesh = 0.0; // largest cut diameter
};

Net build_net(const IfsSystem& system, const SymbolicSubset& subset, double delta);

} // namespace lipext
