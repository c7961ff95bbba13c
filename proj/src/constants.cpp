#include "lipext/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lipext/errors.hpp"
#include "lipext/measure.hpp"
#include "lipext/random.hpp"
#include "lipext/rational.hpp"

namespace lipext {

namespace {

constexpr std::size_t kExhaustiveLimit = std::size_t{1} << 14;
constexpr std::size_t kSampledWords = 4096;

struct WordStats {
    double c_metric = std::numeric_limits<double>::infinity();
    double C_metric = 0.0;
    double C_child = 0.0;
    double K = 1.0;
    std::size_t words = 0;
    Word worst;
};

void visit_word(const IfsSystem& system, const ConformalMap& f, double d, WordStats& st, const Word& w) {
    double mn = f.min_derivative(system.domain());
    double mx = f.max_derivative(system.domain());
    if (!(mn > 0.0) || !(d > 0.0)) throw CertificationError("degenerate derivative or diameter", w.str());
    if (mn / d < st.c_metric) {
        st.c_metric = mn / d;
        st.worst = w;
    }
    st.C_metric = std::max(st.C_metric, mx / d);
    st.K = std::max(st.K, mx / mn);
    ++st.words;
}

Word random_word(Rng& rng, std::size_t alphabet, std::size_t min_len, std::size_t max_len) {
    std::size_t len = min_len + rng.index(max_len - min_len + 1);
    Word w;
    for (std::size_t k = 0; k < len; ++k) w.push_back(static_cast<Symbol>(1 + rng.index(alphabet)));
    return w;
}

Point random_attractor_point(const IfsSystem& system, Rng& rng) {
    return system.point(random_word(rng, system.size(), 48, 48));
}

Point random_domain_point(const IfsSystem& system, Rng& rng) {
    const Ball& v = system.domain();
    Point x(v.center.size());
    for (;;) {
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = v.center[k] + v.radius * rng.uniform(-1.0, 1.0);
        if (v.contains(x)) return x;
    }
}

std::string point_str(const Point& p) {
    std::string out = "(";
    for (std::size_t k = 0; k < p.size(); ++k) out += (k ? "," : "") + format_double(p[k]);
    return out + ")";
}

} // namespace

Constants estimate_constants(const IfsSystem& system, int depth, std::uint64_t seed) {
    if (depth < 1) throw ConfigurationError("constant estimation needs depth >= 1");
    Constants k;
    k.depth = depth;
    k.seed = seed;
    WordStats st;

    std::size_t total = 0;
    double level = 1.0;
    for (int j = 0; j <= depth; ++j) {
        total += static_cast<std::size_t>(level);
        level *= static_cast<double>(system.size());
        if (total > kExhaustiveLimit) break;
    }
    k.exhaustive = total <= kExhaustiveLimit;

    if (k.exhaustive) {
        struct Item {
            Word w;
            ConformalMap f;
        };
        std::vector<Item> stack{{Word{}, ConformalMap::identity(system.dim())}};
        while (!stack.empty()) {
            Item item = std::move(stack.back());
            stack.pop_back();
            double d = system.cylinder_diameter(item.w);
            visit_word(system, item.f, d, st, item.w);
            if (static_cast<int>(item.w.size()) >= depth) continue;
            for (Symbol i = 1; i <= system.size(); ++i) {
                Word child = item.w.child(i);
                st.C_child = std::max(st.C_child, d / system.cylinder_diameter(child));
                stack.push_back({child, item.f.compose(system.generator(i))});
            }
        }
    } else {
        Rng rng(seed);
        std::vector<Word> words{Word{}};
        for (Symbol i = 1; i <= system.size(); ++i) words.push_back(Word{i});
        while (words.size() < kSampledWords) words.push_back(random_word(rng, system.size(), 1, depth));
        for (const auto& w : words) {
            double d = system.cylinder_diameter(w);
            visit_word(system, system.compose(w), d, st, w);
            if (static_cast<int>(w.size()) < depth)
                for (Symbol i = 1; i <= system.size(); ++i)
                    st.C_child = std::max(st.C_child, d / system.cylinder_diameter(w.child(i)));
        }
    }
    k.words_checked = st.words;
    k.c_metric = st.c_metric;
    k.C_metric = st.C_metric;
    k.C_child = st.C_child;
    k.K = st.K;

    if (system.separation().mode == SeparationMode::Strong)
        k.c_gap = check_separation(system, std::min(depth, 8)).c_gap;

    k.s = moran_dimension(system, system.is_similarity() ? 1 : 8).s;
    AhlforsReport ahl = ahlfors_check(system, k.s, 256, seed);
    k.c_ahlfors = ahl.c;
    k.C_ahlfors = ahl.C;

    k.L0 = system.contraction();
    k.c1 = system.min_generator_derivative();
    k.C1 = system.max_generator_derivative();
    k.R = system.diameter() / 2.0;
    k.c = std::min({k.c_metric, k.c_gap, k.c_ahlfors / 2.0, 0.5});
    k.C = std::max({k.C_metric, k.C_child, 2.0 * k.C_ahlfors, 1.0});
    if (!(k.c > 0.0) || !std::isfinite(k.C) || !(k.K >= 1.0) || !std::isfinite(k.K))
        throw CertificationError("constants could not be bracketed", st.worst.str());
    return k;
}

Constants match_constants(const Constants& a, const Constants& b) {
    Constants m = a;
    m.c = std::min(a.c, b.c);
    m.C = std::max(a.C, b.C);
    m.K = std::max(a.K, b.K);
    m.L0 = std::max(a.L0, b.L0);
    m.c1 = std::min(a.c1, b.c1);
    m.C1 = std::max(a.C1, b.C1);
    m.R = std::min(a.R, b.R);
    m.c_metric = std::min(a.c_metric, b.c_metric);
    m.C_metric = std::max(a.C_metric, b.C_metric);
    m.C_child = std::max(a.C_child, b.C_child);
    m.c_gap = std::min(a.c_gap, b.c_gap);
    m.c_ahlfors = std::min(a.c_ahlfors, b.c_ahlfors);
    m.C_ahlfors = std::max(a.C_ahlfors, b.C_ahlfors);
    m.depth = std::min(a.depth, b.depth);
    m.words_checked = a.words_checked + b.words_checked;
    m.exhaustive = a.exhaustive && b.exhaustive;
    return m;
}

SeparationReport check_separation(const IfsSystem& system, int depth, std::optional<double> c) {
    if (depth < 1) throw ConfigurationError("separation check needs depth >= 1");
    SeparationReport rep;
    rep.mode = system.separation().mode;
    rep.depth = depth;

    if (rep.mode == SeparationMode::Strong) {
        rep.c_gap = std::numeric_limits<double>::infinity();
        // Gap ratios of similarity systems are the same at every level.
        int parent_depth = system.is_similarity() ? 0 : depth - 1;
        for (int len = 0; len <= parent_depth; ++len) {
            for (const auto& u : words_of_length(system.size(), static_cast<std::size_t>(len))) {
                double du = system.cylinder_diameter(u);
                for (Symbol i = 1; i <= system.size(); ++i) {
                    for (Symbol j = i + 1; j <= system.size(); ++j) {
                        Bounds b = cylinder_distance(system, u.child(i), u.child(j), 1e-12 * du);
                        if (!(b.lo > 0.0))
                            throw SeparationViolation("cylinders " + u.child(i).str() + " and " + u.child(j).str() +
                                                      " are not separated");
                        if (b.lo / du < rep.c_gap) {
                            rep.c_gap = b.lo / du;
                            rep.gap_parent = u;
                            rep.gap_left = i;
                            rep.gap_right = j;
                        }
                    }
                }
            }
        }
        rep.passed = true;
        return rep;
    }

    const OpenSetWitness& wit = *system.separation().witness;
    const double tol = kTolGeom * std::max(1.0, system.diameter());
    if (static_cast<int>(wit.open_set.center.size()) != system.dim() || static_cast<int>(wit.x0.size()) != system.dim())
        throw ConfigurationError("open set witness has the wrong dimension");
    if (!(wit.r0 > 0.0 && wit.r0 < 1.0)) rep.failures.push_back("r0 must lie in (0, 1)");
    if (!system.domain().contains(wit.open_set, tol)) rep.failures.push_back("closure of O is not inside V");
    // B(x0, r0) inside the open ball O.
    if (distance(wit.x0, wit.open_set.center) + wit.r0 > wit.open_set.radius + tol)
        rep.failures.push_back("B(x0, r0) is not inside O");
    if (point_distance(system, wit.x0, Word{}, tol).hi > tol) rep.failures.push_back("x0 is not on the attractor");
    std::vector<Ball> images;
    for (const auto& f : system.generators()) images.push_back(f.image(wit.open_set));
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (!wit.open_set.contains(images[i], tol))
            rep.failures.push_back("f_" + std::to_string(i + 1) + "(O) is not inside O");
        for (std::size_t j = i + 1; j < images.size(); ++j)
            if (images[i].gap_to(images[j]) < -tol)
                rep.failures.push_back("f_" + std::to_string(i + 1) + "(O) and f_" + std::to_string(j + 1) +
                                       "(O) overlap");
    }
    double cc = c ? *c : estimate_constants(system, depth).c;
    for (int len = 1; len <= depth; ++len) {
        for (const auto& w : words_of_length(system.size(), static_cast<std::size_t>(len))) {
            Point centre = system.compose(w)(wit.x0);
            double radius = cc * system.cylinder_diameter(w) * wit.r0;
            ++rep.exclusion_checked;
            if (check_exclusion(system, centre, radius, w) != Exclusion::Holds)
                rep.failures.push_back("exclusion fails around f_w(x0) for w = " + w.str());
        }
    }
    rep.c_gap = 0.0;
    rep.passed = rep.failures.empty();
    return rep;
}

std::vector<InequalityCheck> inequality_suite(const IfsSystem& system, const Constants& k,
                                              std::size_t samples, std::uint64_t seed) {
    const double tol = kTolGeom;
    const std::size_t depth = static_cast<std::size_t>(std::max(1, k.depth));
    Rng rng(seed);
    std::vector<InequalityCheck> out;

    // Distances below a few ulps of the coordinates carry no information.
    double scale = system.diameter();
    for (double v : system.hull().center) scale = std::max(scale, std::abs(v) + system.diameter());
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() * scale;

    // lhs <= rhs up to relative tolerance (plus the roundoff floor for distances).
    auto record_floor = [&](InequalityCheck& chk, double lhs, double rhs, double abs_floor, auto witness) {
        double slack = rhs + tol * std::abs(rhs) + abs_floor - lhs;
        double margin = slack / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        bool bad = slack < 0.0;
        if (chk.samples == 0 || margin < chk.worst_margin) chk.worst_margin = margin;
        if (bad) {
            if (chk.violations == 0) chk.witness = witness();
            ++chk.violations;
        }
    };
    auto record = [&](InequalityCheck& chk, double lhs, double rhs, auto witness) {
        record_floor(chk, lhs, rhs, 0.0, witness);
    };

    {
        InequalityCheck chk;
        chk.name = "contraction";
        for (std::size_t n = 0; n < samples; ++n) {
            Symbol i = static_cast<Symbol>(1 + rng.index(system.size()));
            Point x = random_domain_point(system, rng), y = random_domain_point(system, rng);
            const auto& f = system.generator(i);
            record_floor(chk, distance(f(x), f(y)), k.L0 * distance(x, y),
                   floor, [&] { return "f_" + std::to_string(i) + " at " + point_str(x) + "," + point_str(y); });
            ++chk.samples;
        }
        out.push_back(chk);
    }
    {
        InequalityCheck chk;
        chk.name = "derivative_bracket";
        for (std::size_t n = 0; n < samples; ++n) {
            Word w = random_word(rng, system.size(), 1, depth);
            Point x = random_domain_point(system, rng);
            double d = system.cylinder_diameter(w);
            double D = system.compose(w).derivative_norm(x);
            auto wit = [&] { return "w=" + w.str() + " x=" + point_str(x); };
            record(chk, k.c * d, D, wit);
            record(chk, D, k.C * d, wit);
            ++chk.samples;
        }
        out.push_back(chk);
    }
    {
        InequalityCheck chk;
        chk.name = "ball_inclusion";
        for (std::size_t n = 0; n < samples; ++n) {
            Word w = random_word(rng, system.size(), 1, depth);
            Point x = random_attractor_point(system, rng);
            double r = k.R * std::exp(rng.uniform(std::log(1e-6), 0.0));
            ConformalMap f = system.compose(w);
            Ball img = f.image(Ball{x, r});
            Ball inner{f(x), k.c * system.cylinder_diameter(w) * r};
            // Inclusion slack: img.radius - (|centre offset| + inner.radius) >= 0.
            double need = distance(inner.center, img.center) + inner.radius;
            record_floor(chk, need, img.radius, floor, [&] { return "w=" + w.str() + " x=" + point_str(x) + " r=" + format_double(r); });
            ++chk.samples;
        }
        out.push_back(chk);
    }
    {
        InequalityCheck chk;
        chk.name = "metric_bracket";
        for (std::size_t n = 0; n < samples; ++n) {
            Word w = random_word(rng, system.size(), 1, depth);
            Point x = random_attractor_point(system, rng), y = random_attractor_point(system, rng);
            if (distance(x, y) == 0.0) continue;
            ConformalMap f = system.compose(w);
            double d = system.cylinder_diameter(w);
            double img = distance(f(x), f(y));
            auto wit = [&] { return "w=" + w.str() + " x=" + point_str(x) + " y=" + point_str(y); };
            record_floor(chk, k.c * d * distance(x, y), img, floor, wit);
            record_floor(chk, img, k.C * d * distance(x, y), floor, wit);
            ++chk.samples;
        }
        out.push_back(chk);
    }
    {
        InequalityCheck chk;
        chk.name = "child_diameter";
        for (std::size_t n = 0; n < samples; ++n) {
            Word w = random_word(rng, system.size(), 0, depth - 1);
            Symbol i = static_cast<Symbol>(1 + rng.index(system.size()));
            record_floor(chk, system.cylinder_diameter(w), k.C * system.cylinder_diameter(w.child(i)),
                   floor, [&] { return "w=" + w.str() + " i=" + std::to_string(i); });
            ++chk.samples;
        }
        out.push_back(chk);
    }
    {
        InequalityCheck chk;
        chk.name = "geometric_decay";
        for (std::size_t n = 0; n < samples; ++n) {
            Word w = random_word(rng, system.size(), 1, depth);
            record_floor(chk, system.cylinder_diameter(w),
                   std::pow(k.L0, static_cast<double>(w.size())) * system.diameter(), floor, [&] { return "w=" + w.str(); });
            ++chk.samples;
        }
        out.push_back(chk);
    }
    {
        InequalityCheck chk;
        chk.name = "ahlfors";
        const double r_min = std::pow(system.contraction(), 10) * system.diameter();
        for (std::size_t n = 0; n < samples; ++n) {
            Point x = random_attractor_point(system, rng);
            double r = std::exp(rng.uniform(std::log(r_min), std::log(k.R)));
            MeasureInterval m = ball_measure(system, x, r, k.s, enumeration_depth(system, r, 16.0));
            double rs = std::pow(r, k.s);
            auto wit = [&] { return "x=" + point_str(x) + " r=" + format_double(r); };
            record(chk, k.c * rs, m.lo, wit);
            record(chk, m.hi, k.C * rs, wit);
            ++chk.samples;
        }
        out.push_back(chk);
    }
    {
        InequalityCheck chk;
        chk.name = "bounded_distortion";
        for (std::size_t n = 0; n < samples; ++n) {
            Word w = random_word(rng, system.size(), 1, depth);
            Point x = random_domain_point(system, rng), y = random_domain_point(system, rng);
            ConformalMap f = system.compose(w);
            record(chk, f.derivative_norm(x), k.K * f.derivative_norm(y),
                   [&] { return "w=" + w.str() + " x=" + point_str(x) + " y=" + point_str(y); });
            ++chk.samples;
        }
        out.push_back(chk);
    }
    if (system.separation().mode == SeparationMode::Strong) {
        InequalityCheck chk;
        chk.name = "sibling_separation";
        for (std::size_t n = 0; n < samples; ++n) {
            Word u = random_word(rng, system.size(), 0, depth - 1);
            Symbol i = static_cast<Symbol>(1 + rng.index(system.size()));
            Symbol j = static_cast<Symbol>(1 + rng.index(system.size() - 1));
            if (j >= i) ++j;
            double du = system.cylinder_diameter(u);
            Bounds b = cylinder_distance(system, u.child(i), u.child(j), 1e-12 * du);
            record_floor(chk, k.c * du, b.lo, floor, [&] { return "u=" + u.str() + " i=" + std::to_string(i) + " j=" + std::to_string(j); });
            ++chk.samples;
        }
        out.push_back(chk);
    } else {
        InequalityCheck chk;
        chk.name = "open_set_exclusion";
        const OpenSetWitness& wit = *system.separation().witness;
        for (std::size_t n = 0; n < samples; ++n) {
            Word w = random_word(rng, system.size(), 1, depth);
            Point centre = system.compose(w)(wit.x0);
            double radius = k.c * system.cylinder_diameter(w) * wit.r0;
            bool holds = check_exclusion(system, centre, radius, w) == Exclusion::Holds;
            record(chk, holds ? 0.0 : 1.0, 0.0, [&] { return "w=" + w.str(); });
            ++chk.samples;
        }
        out.push_back(chk);
    }
    return out;
}

std::string format_constants(const Constants& k) {
    std::ostringstream os;
    auto line = [&](const char* key, double v) { os << key << " = " << format_double(v) << '\n'; };
    line("c", k.c);
    line("C", k.C);
    line("K", k.K);
    line("L0", k.L0);
    line("c1", k.c1);
    line("C1", k.C1);
    line("R", k.R);
    line("s", k.s);
    line("c_metric", k.c_metric);
    line("C_metric", k.C_metric);
    line("C_child", k.C_child);
    line("c_gap", k.c_gap);
    line("c_ahlfors", k.c_ahlfors);
    line("C_ahlfors", k.C_ahlfors);
    os << "depth = " << k.depth << '\n';
    os << "seed = " << k.seed << '\n';
    os << "words_checked = " << k.words_checked << '\n';
    os << "exhaustive = " << (k.exhaustive ? "true" : "false") << '\n';
    return os.str();
}

} // namespace lipext
