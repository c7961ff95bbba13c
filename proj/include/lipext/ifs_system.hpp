#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lipext/conformal_map.hpp"
#include "lipext/word.hpp"

namespace lipext {

// Default tolerances: exact-family assertions and sampled ones.
inline constexpr double kTolGeom = 1e-9;
inline constexpr double kTolSample = 1e-6;

enum class SeparationMode { Strong, Open };

// Witness for the strong open set condition: an open ball O with x0 in E n O and
// the open ball B(x0, r0) inside O.
struct OpenSetWitness {
    Ball open_set;
    Point x0;
    double r0 = 0.0;
};

struct SeparationSpec {
    SeparationMode mode = SeparationMode::Strong;
    std::optional<OpenSetWitness> witness;
};

// A conformal IFS {f_1..f_N} with its attractor E.
//
// The domain V is a closed ball (an interval in 1-D). When omitted for similarity
// systems it is built around the attractor so that B(x, d(E)/2) lies in V for x in E.
// In one dimension the hull [min E, max E] is computed exactly and its endpoints are
// points of E, which makes every cylinder hull f_w(hull) exact. In higher dimensions
// the hull is an invariant bounding ball and d(E) is an upper bound from sampled
// representatives unless given.
class IfsSystem {
public:
    IfsSystem(std::string name, std::vector<ConformalMap> maps, SeparationSpec separation = {},
              std::optional<Ball> domain = std::nullopt, std::optional<double> diameter = std::nullopt);

    const std::string& name() const { return name_; }
    std::size_t size() const { return maps_.size(); }
    int dim() const { return dim_; }
    bool is_similarity() const { return similarity_; }
    const std::vector<ConformalMap>& generators() const { return maps_; }
    const ConformalMap& generator(Symbol i) const { return maps_.at(i - 1u); }
    const SeparationSpec& separation() const { return separation_; }

    const Ball& domain() const { return domain_; }
    const Ball& hull() const { return hull_; }
    double diameter() const { return diameter_; }
    // Fixed point of f_1; representatives of E_w are f_w(anchor).
    const Point& anchor() const { return anchor_; }
    // L0: Lipschitz bound of every generator on V.
    double contraction() const { return contraction_; }
    // c1 <= ||Df_i(x)|| <= C1 on V.
    double min_generator_derivative() const { return c1_; }
    double max_generator_derivative() const { return C1_; }

    ConformalMap compose(const Word& w) const;
    // d_w: exact for similarities; for 1-D systems |f_w(max E) - f_w(min E)|.
    double cylinder_diameter(const Word& w) const;
    // Ball containing E_w (exact hull interval in 1-D).
    Ball cylinder_ball(const Word& w) const;
    // Points known to lie in E_w: the hull endpoints in 1-D, the representative otherwise.
    std::vector<Point> known_points(const Word& w) const;

    Point point(const Word& w) const;
    Point point(const InfiniteWord& address) const;
    double point1(const Word& w) const;

private:
    std::string name_;
    std::vector<ConformalMap> maps_;
    SeparationSpec separation_;
    int dim_ = 1;
    bool similarity_ = true;
    Ball domain_;
    Ball hull_;
    double diameter_ = 0.0;
    Point anchor_;
    double contraction_ = 0.0;
    double c1_ = 0.0;
    double C1_ = 0.0;
};

// Composed evaluator f_w; the empty word gives the identity.
ConformalMap compose_word(const IfsSystem& system, const Word& w);

struct DiameterEstimate {
    double value = 0.0;
    double error = 0.0;
};

// Similarities: exact product of ratios times d(E). Otherwise the maximum pairwise
// distance of depth-`depth` representatives under w, with error 2 L0^depth d(E).
DiameterEstimate cylinder_diameter(const IfsSystem& system, const Word& w, int depth);

// Fixed point of f_w by iteration until successive iterates differ by < tol/2.
Point fixed_point(const IfsSystem& system, const Word& w, double tol = kTolGeom);

// Fixed point of a contraction, iterated to working precision.
Point iterate_to_fixed_point(const ConformalMap& f, Point start);

struct Bounds {
    double lo = 0.0;
    double hi = 0.0;
};

// Branch-and-bound enclosure of dist(E_u, E_v), refined until hi - lo <= tol.
Bounds cylinder_distance(const IfsSystem& system, const Word& u, const Word& v, double tol);
// Enclosure of dist(x, E_u).
Bounds point_distance(const IfsSystem& system, const Point& x, const Word& u, double tol);

enum class Exclusion { Holds, Violated, Undetermined };

// Decides whether (E \ E_w) n B(center, radius) is empty.
Exclusion check_exclusion(const IfsSystem& system, const Point& center, double radius, const Word& w,
                          std::size_t max_extra_depth = 40);

} // namespace lipext
