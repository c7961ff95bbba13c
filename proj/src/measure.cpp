#include "lipext/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lipext/errors.hpp"
#include "lipext/random.hpp"

namespace lipext {

namespace {

double log_sum_exp(const std::vector<double>& logs, double s) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double l : logs) peak = std::max(peak, s * l);
    double sum = 0.0;
    for (double l : logs) sum += std::exp(s * l - peak);
    return peak + std::log(sum);
}

std::vector<double> level_log_diameters(const IfsSystem& system, std::size_t k) {
    std::vector<double> out;
    for (const auto& w : words_of_length(system.size(), k)) out.push_back(std::log(system.cylinder_diameter(w)));
    return out;
}

// Bisection for the root of a decreasing function on (0, hi].
template <class F>
double bisect_root(F f, double hi, double& lo_out, double& hi_out) {
    double lo = 0.0;
    for (int iter = 0; iter < 200 && hi - lo > 0.0; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (f(mid) > 0.0) lo = mid;
        else hi = mid;
    }
    lo_out = lo;
    hi_out = hi;
    return 0.5 * (lo + hi);
}

std::vector<double> child_weights(const IfsSystem& system, const Word& u, double s) {
    std::vector<double> w(system.size());
    double total = 0.0;
    for (Symbol i = 1; i <= system.size(); ++i) {
        double v = system.is_similarity() ? std::pow(system.generator(i).as_similarity()->ratio, s)
                                          : std::pow(system.cylinder_diameter(u.child(i)), s);
        w[i - 1u] = v;
        total += v;
    }
    for (double& v : w) v /= total;
    return w;
}

struct Node {
    Word word;
    double mass;
};

template <class Skip, class Whole>
MeasureInterval enumerate_ball(const IfsSystem& system, const Point& x, double r, double s, int depth,
                               Skip skip, Whole whole) {
    MeasureInterval out;
    out.sufficient = std::pow(system.contraction(), depth) * system.diameter() < r / 4.0;
    const double slack = 1e-12 * std::max(1.0, r);
    std::vector<double> sim_weights;
    if (system.is_similarity()) sim_weights = child_weights(system, Word{}, s);
    std::vector<Node> stack{{Word{}, 1.0}};
    while (!stack.empty()) {
        Node node = std::move(stack.back());
        stack.pop_back();
        if (skip(node.word)) continue;
        Ball b = system.cylinder_ball(node.word);
        if (b.gap_to(x) > r + slack) continue;
        bool complete = whole(node.word);
        if (complete && distance(b.center, x) + b.radius <= r + slack) {
            out.lo += node.mass;
            out.hi += node.mass;
            continue;
        }
        if (complete && static_cast<int>(node.word.size()) >= depth) {
            out.hi += node.mass;
            continue;
        }
        std::vector<double> weights = system.is_similarity() ? sim_weights : child_weights(system, node.word, s);
        for (Symbol i = 1; i <= system.size(); ++i) stack.push_back({node.word.child(i), node.mass * weights[i - 1u]});
    }
    return out;
}

} // namespace

DimensionEstimate moran_dimension(const IfsSystem& system, int depth) {
    if (depth < 1) throw ConfigurationError("moran_dimension needs depth >= 1");
    const double n = static_cast<double>(system.dim());
    DimensionEstimate est;
    est.depth = depth;
    if (system.is_similarity()) {
        std::vector<double> logs;
        for (const auto& f : system.generators()) logs.push_back(std::log(f.as_similarity()->ratio));
        auto phi = [&](double s) { return log_sum_exp(logs, s); };
        if (phi(n) > 0.0) throw ConfigurationError("ratios too large for dimension <= ambient dimension");
        est.s = bisect_root(phi, n, est.s_lo, est.s_hi);
        double total = 0.0;
        for (double l : logs) total += std::exp(est.s * l);
        est.residual = std::abs(total - 1.0);
        return est;
    }
    auto solve = [&](std::size_t k, double& residual) {
        std::vector<double> coarse = level_log_diameters(system, k);
        std::vector<double> fine = level_log_diameters(system, k + 1);
        auto phi = [&](double s) { return log_sum_exp(fine, s) - log_sum_exp(coarse, s); };
        if (phi(n) > 0.0) throw ConfigurationError("level sums do not decrease; system is not contractive enough");
        double lo = 0.0, hi = 0.0;
        double s = bisect_root(phi, n, lo, hi);
        residual = std::abs(std::exp(phi(s)) - 1.0);
        return s;
    };
    double r1 = 0.0, r2 = 0.0;
    double s1 = solve(static_cast<std::size_t>(depth), r1);
    double s2 = solve(static_cast<std::size_t>(depth) + 2, r2);
    est.s = s2;
    est.residual = r2;
    est.s_lo = std::min(s1, s2);
    est.s_hi = std::max(s1, s2);
    return est;
}

double cylinder_measure(const IfsSystem& system, const Word& w, double s) {
    double mass = 1.0;
    Word u;
    for (Symbol sym : w.symbols()) {
        if (sym < 1 || sym > system.size()) throw DomainError("symbol out of alphabet: " + std::to_string(sym));
        mass *= child_weights(system, u, s)[sym - 1u];
        u.push_back(sym);
    }
    return mass;
}

MeasureInterval ball_measure(const IfsSystem& system, const Point& x, double r, double s, int depth) {
    return enumerate_ball(
        system, x, r, s, depth, [](const Word&) { return false; }, [](const Word&) { return true; });
}

MeasureInterval density_defect(const IfsSystem& system, const SymbolicSubset& A, const Point& x, double r,
                               double s, int depth) {
    MeasureInterval m = enumerate_ball(
        system, x, r, s, depth, [&](const Word& u) { return A.contains_cylinder(u); },
        [&](const Word& u) { return !A.meets(u); });
    double scale = std::pow(r, -s);
    m.lo *= scale;
    m.hi *= scale;
    return m;
}

int enumeration_depth(const IfsSystem& system, double r, double factor) {
    int depth = 0;
    double d = system.diameter();
    while (d >= r / factor && depth < 200) {
        d *= system.contraction();
        ++depth;
    }
    return depth;
}

AhlforsReport ahlfors_check(const IfsSystem& system, double s, std::size_t samples, std::uint64_t seed) {
    AhlforsReport report;
    report.samples = samples;
    if (samples == 0) return report;
    Rng rng(seed);
    const double d = system.diameter();
    const double r_min = std::pow(system.contraction(), 10) * d;
    const double r_max = d / 2.0;
    report.c = std::numeric_limits<double>::infinity();
    report.C = 0.0;
    for (std::size_t n = 0; n < samples; ++n) {
        Word address;
        for (int k = 0; k < 48; ++k) address.push_back(static_cast<Symbol>(1 + rng.index(system.size())));
        Point x = system.point(address);
        double r = std::exp(rng.uniform(std::log(r_min), std::log(r_max)));
        MeasureInterval m = ball_measure(system, x, r, s, enumeration_depth(system, r, 16.0));
        double scale = std::pow(r, s);
        if (m.lo / scale < report.c) {
            report.c = m.lo / scale;
            report.worst_x = x;
            report.worst_r = r;
        }
        report.C = std::max(report.C, m.hi / scale);
    }
    return report;
}

DensityCertificate density_certificate(const IfsSystem& system, const SymbolicSubset& A, const Point& x,
                                       std::vector<double> radii, double s) {
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] < radii[i - 1])) throw ConfigurationError("density radii must strictly decrease");
    DensityCertificate cert{x, A, std::move(radii), {}};
    for (double r : cert.radii)
        cert.defects.push_back(density_defect(system, A, x, r, s, enumeration_depth(system, r, 16.0)));
    return cert;
}

} // namespace lipext
