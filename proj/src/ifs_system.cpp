#include "lipext/ifs_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "lipext/errors.hpp"

namespace lipext {

namespace {

Ball interval_hull(const std::vector<ConformalMap>& maps, Ball start) {
    double lo = start.center[0] - start.radius;
    double hi = start.center[0] + start.radius;
    for (int iter = 0; iter < 20000; ++iter) {
        double nlo = std::numeric_limits<double>::infinity();
        double nhi = -nlo;
        for (const auto& f : maps) {
            double a = f.apply(lo);
            double b = f.apply(hi);
            nlo = std::min({nlo, a, b});
            nhi = std::max({nhi, a, b});
        }
        bool done = nlo == lo && nhi == hi;
        lo = nlo;
        hi = nhi;
        if (done) break;
    }
    return Ball{{0.5 * (lo + hi)}, 0.5 * (hi - lo)};
}

// Ball B(c, R) with f_i(B) inside B for all similarity generators.
Ball invariant_ball(const std::vector<ConformalMap>& maps, int dim) {
    Point c(dim, 0.0);
    std::vector<Point> fixes;
    for (const auto& f : maps) fixes.push_back(iterate_to_fixed_point(f, Point(dim, 0.0)));
    for (const auto& p : fixes)
        for (int k = 0; k < dim; ++k) c[k] += p[k] / static_cast<double>(fixes.size());
    double radius = 0.0;
    for (const auto& f : maps) {
        double r = f.as_similarity()->ratio;
        radius = std::max(radius, distance(f(c), c) / (1.0 - r));
    }
    return Ball{c, radius};
}

double sampled_diameter(const IfsSystem& system) {
    std::size_t depth = 1;
    while (std::pow(static_cast<double>(system.size()), static_cast<double>(depth + 1)) <= 4096.0) ++depth;
    std::vector<Point> pts;
    for (const auto& w : words_of_length(system.size(), depth)) pts.push_back(system.point(w));
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, distance(pts[i], pts[j]));
    // Every point of E is within r^depth d(E) of a representative, so d(E) <= best + 2 r^depth d(E).
    double r = 0.0;
    for (const auto& f : system.generators()) r = std::max(r, f.as_similarity()->ratio);
    double slack = 1.0 - 2.0 * std::pow(r, static_cast<double>(depth));
    double hull = 2.0 * system.hull().radius;
    return slack > 0.0 ? std::min(best / slack, hull) : hull;
}

} // namespace

Point iterate_to_fixed_point(const ConformalMap& f, Point start) {
    if (const auto* s = f.as_similarity(); s && f.dim() == 1)
        return {s->translation[0] / (1.0 - s->ratio * s->orthogonal[0])};
    Point x = std::move(start);
    int quiet = 0;
    for (int iter = 0; iter < 100000; ++iter) {
        Point y = f(x);
        double d = distance(x, y);
        double scale = 0.0;
        for (double v : y) scale = std::max(scale, std::abs(v));
        x = std::move(y);
        if (d <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale)) {
            if (++quiet >= 3) return x;
        } else {
            quiet = 0;
        }
    }
    return x;
}

IfsSystem::IfsSystem(std::string name, std::vector<ConformalMap> maps, SeparationSpec separation,
                     std::optional<Ball> domain, std::optional<double> diameter)
    : name_(std::move(name)), maps_(std::move(maps)), separation_(std::move(separation)) {
    if (maps_.size() < 2) throw ConfigurationError("an IFS needs at least two maps");
    dim_ = maps_.front().dim();
    for (const auto& f : maps_) {
        if (f.dim() != dim_) throw ConfigurationError("generators have mismatched dimensions");
        if (!f.is_similarity()) similarity_ = false;
    }
    if (!similarity_ && dim_ != 1) throw UnsupportedError("Moebius generators are one-dimensional");
    if (!similarity_ && !domain) throw ConfigurationError("Moebius systems need an explicit domain");
    if (similarity_) {
        for (const auto& f : maps_)
            if (!(f.as_similarity()->ratio > 0.0 && f.as_similarity()->ratio < 1.0))
                throw ConfigurationError("similarity ratio must lie in (0, 1)");
    }

    if (dim_ == 1) {
        Ball start = domain ? *domain : invariant_ball(maps_, 1);
        hull_ = interval_hull(maps_, start);
        diameter_ = 2.0 * hull_.radius;
    } else {
        hull_ = invariant_ball(maps_, dim_);
    }
    anchor_ = iterate_to_fixed_point(maps_.front(), hull_.center);

    if (dim_ != 1) diameter_ = diameter ? *diameter : sampled_diameter(*this);
    else if (diameter) diameter_ = *diameter;
    if (!(diameter_ > 0.0)) throw DegenerateError("attractor has zero diameter");

    if (domain) {
        domain_ = *domain;
    } else {
        double radius = 0.0;
        for (const auto& p : {hull_.center}) {
            for (const auto& f : maps_)
                radius = std::max(radius, distance(f(p), p) / (1.0 - f.as_similarity()->ratio));
        }
        domain_ = Ball{hull_.center, std::max(radius, hull_.radius + 0.5 * diameter_)};
    }
    if (static_cast<int>(domain_.center.size()) != dim_) throw ConfigurationError("domain dimension mismatch");
    if (!domain_.contains(hull_, 1e-12 * std::max(1.0, domain_.radius)))
        throw ConfigurationError("domain does not contain the attractor");

    c1_ = std::numeric_limits<double>::infinity();
    C1_ = 0.0;
    for (const auto& f : maps_) {
        Ball img = f.image(domain_); // throws when a pole lies in V
        if (!domain_.contains(img, 1e-12 * std::max(1.0, domain_.radius)))
            throw ConfigurationError("generator does not map the domain into itself");
        c1_ = std::min(c1_, f.min_derivative(domain_));
        C1_ = std::max(C1_, f.max_derivative(domain_));
    }
    if (!(C1_ < 1.0)) throw ConfigurationError("generators are not contractions on the domain");
    contraction_ = C1_;

    if (separation_.mode == SeparationMode::Open && !separation_.witness)
        throw ConfigurationError("open set condition declared without a witness");
}

ConformalMap IfsSystem::compose(const Word& w) const {
    ConformalMap f = ConformalMap::identity(dim_);
    for (std::size_t k = w.size(); k-- > 0;) {
        if (w[k] < 1 || w[k] > maps_.size()) throw DomainError("symbol out of alphabet: " + std::to_string(w[k]));
        f = maps_[w[k] - 1u].compose(f);
    }
    return f;
}

Ball IfsSystem::cylinder_ball(const Word& w) const {
    Ball b = hull_;
    for (std::size_t k = w.size(); k-- > 0;) {
        if (w[k] < 1 || w[k] > maps_.size()) throw DomainError("symbol out of alphabet: " + std::to_string(w[k]));
        b = maps_[w[k] - 1u].image(b);
    }
    return b;
}

double IfsSystem::cylinder_diameter(const Word& w) const {
    if (similarity_) {
        double r = diameter_;
        for (Symbol s : w.symbols()) {
            if (s < 1 || s > maps_.size()) throw DomainError("symbol out of alphabet: " + std::to_string(s));
            r *= maps_[s - 1u].as_similarity()->ratio;
        }
        return r;
    }
    return 2.0 * cylinder_ball(w).radius;
}

std::vector<Point> IfsSystem::known_points(const Word& w) const {
    if (dim_ == 1) {
        Ball b = cylinder_ball(w);
        return {{b.center[0] - b.radius}, {b.center[0] + b.radius}};
    }
    return {point(w)};
}

double IfsSystem::point1(const Word& w) const {
    double x = anchor_[0];
    for (std::size_t k = w.size(); k-- > 0;) {
        if (w[k] < 1 || w[k] > maps_.size()) throw DomainError("symbol out of alphabet: " + std::to_string(w[k]));
        x = maps_[w[k] - 1u].apply(x);
    }
    return x;
}

Point IfsSystem::point(const Word& w) const {
    if (dim_ == 1) return {point1(w)};
    Point x = anchor_;
    for (std::size_t k = w.size(); k-- > 0;) {
        if (w[k] < 1 || w[k] > maps_.size()) throw DomainError("symbol out of alphabet: " + std::to_string(w[k]));
        x = maps_[w[k] - 1u](x);
    }
    return x;
}

Point IfsSystem::point(const InfiniteWord& address) const {
    if (address.cycle.empty()) throw ConfigurationError("infinite address needs a non-empty cycle");
    Point x;
    bool anchor_cycle = true;
    for (Symbol s : address.cycle.symbols()) anchor_cycle = anchor_cycle && s == 1;
    if (anchor_cycle) x = anchor_;
    else x = iterate_to_fixed_point(compose(address.cycle), anchor_);
    const Word& p = address.prefix;
    for (std::size_t k = p.size(); k-- > 0;) {
        if (p[k] < 1 || p[k] > maps_.size()) throw DomainError("symbol out of alphabet: " + std::to_string(p[k]));
        x = maps_[p[k] - 1u](x);
    }
    return x;
}

ConformalMap compose_word(const IfsSystem& system, const Word& w) { return system.compose(w); }

DiameterEstimate cylinder_diameter(const IfsSystem& system, const Word& w, int depth) {
    if (system.is_similarity()) return {system.cylinder_diameter(w), 0.0};
    if (depth < static_cast<int>(w.size())) throw ConfigurationError("depth must be at least |w|");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::vector<Point> pts;
    for (const auto& v : words_of_length(system.size(), static_cast<std::size_t>(depth) - w.size())) {
        Point p = system.point(w + v);
        if (system.dim() == 1) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        } else {
            pts.push_back(std::move(p));
        }
    }
    double value = 0.0;
    if (system.dim() == 1) {
        value = hi - lo;
    } else {
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) value = std::max(value, distance(pts[i], pts[j]));
    }
    double error = 2.0 * std::pow(system.contraction(), depth) * system.diameter();
    return {value, error};
}

Point fixed_point(const IfsSystem& system, const Word& w, double tol) {
    if (w.empty()) throw ConfigurationError("fixed point of the empty word is undefined");
    ConformalMap f = system.compose(w);
    Point x = system.anchor();
    for (int iter = 0; iter < 100000; ++iter) {
        Point y = f(x);
        double d = distance(x, y);
        x = std::move(y);
        if (d < 0.5 * tol) return x;
    }
    throw NumericError("fixed point iteration did not converge");
}

namespace {

struct PairNode {
    double lo;
    Word a;
    Word b;
    bool operator>(const PairNode& o) const { return lo > o.lo; }
};

double known_gap(const IfsSystem& system, const Word& a, const Word& b) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : system.known_points(a))
        for (const auto& q : system.known_points(b)) best = std::min(best, distance(p, q));
    return best;
}

} // namespace

Bounds cylinder_distance(const IfsSystem& system, const Word& u, const Word& v, double tol) {
    if (u.comparable(v)) return {0.0, 0.0};
    std::priority_queue<PairNode, std::vector<PairNode>, std::greater<>> queue;
    double hi = known_gap(system, u, v);
    queue.push({system.cylinder_ball(u).gap_to(system.cylinder_ball(v)), u, v});
    for (std::size_t pops = 0; !queue.empty(); ++pops) {
        PairNode top = queue.top();
        if (top.lo >= hi - tol || pops > 1000000) return {std::min(top.lo, hi), hi};
        queue.pop();
        bool split_a = system.cylinder_diameter(top.a) >= system.cylinder_diameter(top.b);
        for (Symbol s = 1; s <= system.size(); ++s) {
            Word a = split_a ? top.a.child(s) : top.a;
            Word b = split_a ? top.b : top.b.child(s);
            hi = std::min(hi, known_gap(system, a, b));
            queue.push({system.cylinder_ball(a).gap_to(system.cylinder_ball(b)), std::move(a), std::move(b)});
        }
    }
    return {hi, hi};
}

Bounds point_distance(const IfsSystem& system, const Point& x, const Word& u, double tol) {
    struct Node {
        double lo;
        Word w;
        bool operator>(const Node& o) const { return lo > o.lo; }
    };
    auto known = [&](const Word& w) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : system.known_points(w)) best = std::min(best, distance(p, x));
        return best;
    };
    std::priority_queue<Node, std::vector<Node>, std::greater<>> queue;
    double hi = known(u);
    queue.push({system.cylinder_ball(u).gap_to(x), u});
    for (std::size_t pops = 0; !queue.empty(); ++pops) {
        Node top = queue.top();
        if (top.lo >= hi - tol || pops > 1000000) return {std::min(top.lo, hi), hi};
        queue.pop();
        for (Symbol s = 1; s <= system.size(); ++s) {
            Word w = top.w.child(s);
            hi = std::min(hi, known(w));
            queue.push({system.cylinder_ball(w).gap_to(x), std::move(w)});
        }
    }
    return {hi, hi};
}

Exclusion check_exclusion(const IfsSystem& system, const Point& center, double radius, const Word& w,
                          std::size_t max_extra_depth) {
    Ball wball = system.cylinder_ball(w);
    bool undetermined = false;
    std::vector<Word> stack{Word{}};
    while (!stack.empty()) {
        Word u = std::move(stack.back());
        stack.pop_back();
        if (w.is_prefix_of(u)) continue;
        if (system.cylinder_ball(u).gap_to(center) > radius) continue;
        if (u.is_prefix_of(w)) {
            for (Symbol s = 1; s <= system.size(); ++s) stack.push_back(u.child(s));
            continue;
        }
        for (const auto& p : system.known_points(u)) {
            if (distance(p, center) <= radius && wball.gap_to(p) > 0.0) return Exclusion::Violated;
        }
        std::size_t common = 0;
        while (common < u.size() && common < w.size() && u[common] == w[common]) ++common;
        if (u.size() - common >= max_extra_depth || system.cylinder_diameter(u) < 1e-15) {
            undetermined = true;
            continue;
        }
        for (Symbol s = 1; s <= system.size(); ++s) stack.push_back(u.child(s));
    }
    return undetermined ? Exclusion::Undetermined : Exclusion::Holds;
}

} // namespace lipext
