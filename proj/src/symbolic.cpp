#include "lipext/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lipext/errors.hpp"

namespace lipext {

Point address_to_point(const IfsSystem& system, const Word& w) { return system.point(w); }

Word point_to_address(const IfsSystem& system, const Point& x, int depth, double tol) {
    if (system.separation().mode != SeparationMode::Strong)
        throw ConfigurationError("point_to_address needs strong separation");
    if (static_cast<int>(x.size()) != system.dim()) throw DomainError("point has the wrong dimension");
    // Depth-first with backtracking; under strong separation at most one branch survives.
    std::vector<Word> stack{Word{}};
    while (!stack.empty()) {
        Word u = std::move(stack.back());
        stack.pop_back();
        if (system.cylinder_ball(u).gap_to(x) > tol) continue;
        if (static_cast<int>(u.size()) == depth) return u;
        // Farthest child first so the closest is explored first.
        std::vector<std::pair<double, Symbol>> order;
        for (Symbol i = 1; i <= system.size(); ++i)
            order.push_back({std::max(0.0, system.cylinder_ball(u.child(i)).gap_to(x)), i});
        std::sort(order.begin(), order.end(), [](auto a, auto b) { return a.first > b.first || (a.first == b.first && a.second > b.second); });
        for (auto [g, i] : order) stack.push_back(u.child(i));
    }
    throw NotOnAttractor("point is not within tolerance of the attractor");
}

namespace {

Word certify_index(const IfsSystem& system, Word i, double L, double B, std::optional<double> C) {
    if (C && !i.empty()) {
        double d = system.cylinder_diameter(i);
        double lower = B / (*C * L);
        if (d < lower * (1.0 - kTolGeom))
            throw CertificationError("shortest index is below the minimality bound", i.str());
    }
    return i;
}

} // namespace

Word shortest_index(const IfsSystem& system, const Word& address, double L, double B, std::optional<double> C) {
    if (!(B > 0.0) || !(L > 0.0)) throw ConfigurationError("shortest_index needs L, B > 0");
    for (std::size_t k = 0; k <= address.size(); ++k) {
        Word p = address.prefix(k);
        if (L * system.cylinder_diameter(p) <= B * (1.0 + kTolGeom)) return certify_index(system, p, L, B, C);
    }
    throw InsufficientDepth("address of length " + std::to_string(address.size()) + " is too short");
}

Word shortest_index(const IfsSystem& system, const InfiniteWord& address, double L, double B,
                    std::optional<double> C) {
    if (!(B > 0.0) || !(L > 0.0)) throw ConfigurationError("shortest_index needs L, B > 0");
    Word p;
    for (std::size_t k = 0; k < 4096; ++k) {
        if (L * system.cylinder_diameter(p) <= B * (1.0 + kTolGeom)) return certify_index(system, p, L, B, C);
        p.push_back(address.at(k));
    }
    throw InsufficientDepth("no prefix satisfies the bound within 4096 symbols");
}

Partition binary_partition(const IfsSystem& system, std::size_t m) {
    if (system.size() != 2) throw UnsupportedError("binary_partition needs exactly two generators");
    if (m < 1) throw ConfigurationError("partition size must be >= 1");
    std::vector<Word> cut{Word{}};
    while (cut.size() < m) {
        std::size_t best = 0;
        double best_d = system.cylinder_diameter(cut[0]);
        for (std::size_t k = 1; k < cut.size(); ++k) {
            double d = system.cylinder_diameter(cut[k]);
            double scale = std::max(d, best_d);
            bool larger = d > best_d + 1e-12 * scale;
            bool tie = std::abs(d - best_d) <= 1e-12 * scale;
            if (larger || (tie && cut[k] < cut[best])) {
                best = k;
                best_d = d;
            }
        }
        Word w = cut[best];
        cut.erase(cut.begin() + static_cast<std::ptrdiff_t>(best));
        cut.push_back(w.child(1));
        cut.push_back(w.child(2));
    }
    std::sort(cut.begin(), cut.end());
    Partition out;
    out.c2 = system.cylinder_diameter(cut[0]);
    for (const auto& w : cut) out.c2 = std::min(out.c2, system.cylinder_diameter(w));
    out.cut = Antichain(std::move(cut), 2);
    return out;
}

std::vector<Word> maximal_cylinders_meeting(const IfsSystem& system, const std::vector<Point>& points, double delta,
                                            double tol) {
    if (!(delta > 0.0)) throw ConfigurationError("threshold must be positive");
    std::vector<Word> out;
    for (const auto& x : points) {
        Word u;
        while (!(system.cylinder_diameter(u) < delta * (1.0 - kTolGeom))) {
            // Closest child; under strong separation it is the only one containing x.
            Symbol best = 0;
            double best_gap = std::numeric_limits<double>::infinity();
            for (Symbol i = 1; i <= system.size(); ++i) {
                double g = std::max(0.0, system.cylinder_ball(u.child(i)).gap_to(x));
                if (g < best_gap) {
                    best_gap = g;
                    best = i;
                }
            }
            if (best_gap > tol) throw NotOnAttractor("image point is not within tolerance of the target attractor");
            u.push_back(best);
            if (u.size() > 4096) throw NumericError("cylinder descent did not terminate");
        }
        out.push_back(std::move(u));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Word> diameter_cut(const IfsSystem& system, const Word& root, double delta) {
    if (!(delta > 0.0)) throw ConfigurationError("net mesh must be positive");
    std::vector<Word> out;
    std::vector<Word> stack{root};
    while (!stack.empty()) {
        Word u = std::move(stack.back());
        stack.pop_back();
        if (system.cylinder_diameter(u) <= delta / 2.0) {
            out.push_back(std::move(u));
            continue;
        }
        for (Symbol i = static_cast<Symbol>(system.size()); i >= 1; --i) stack.push_back(u.child(i));
    }
    return out;
}

Net build_net(const IfsSystem& system, const SymbolicSubset& subset, double delta) {
    Net net;
    for (const auto& root : subset.words()) {
        for (auto& w : diameter_cut(system, root, delta)) {
            net.mesh = std::max(net.mesh, system.cylinder_diameter(w));
            net.points.push_back(system.point(w));
            net.words.push_back(std::move(w));
        }
    }
    return net;
}

} // namespace lipext
