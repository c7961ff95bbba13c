#include "lipext/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "lipext/errors.hpp"
#include "lipext/rational.hpp"

namespace lipext {

namespace {

double max_nearest_distance(const std::vector<Point>& from, const std::vector<Point>& to) {
    if (to.empty()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    if (from.empty()) return worst;
    if (from.front().size() == 1) {
        std::vector<double> sorted;
        for (const auto& p : to) sorted.push_back(p[0]);
        std::sort(sorted.begin(), sorted.end());
        for (const auto& p : from) {
            auto it = std::lower_bound(sorted.begin(), sorted.end(), p[0]);
            double best = std::numeric_limits<double>::infinity();
            if (it != sorted.end()) best = *it - p[0];
            if (it != sorted.begin()) best = std::min(best, p[0] - *(it - 1));
            worst = std::max(worst, best);
        }
        return worst;
    }
    for (const auto& p : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : to) best = std::min(best, distance(p, q));
        worst = std::max(worst, best);
    }
    return worst;
}

// Runs `body`, converting library failures into a ConstructionError for `stage`.
template <class F>
auto stage(const std::string& name, F body) -> decltype(body()) {
    try {
        return body();
    } catch (const ConstructionError&) {
        throw;
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw ConstructionError(name, e.what());
    }
}

} // namespace

double lemma2_ball_constant(const IfsSystem& system, const Constants& constants, int depth) {
    const auto& sep = system.separation();
    if (sep.mode == SeparationMode::Open) {
        if (!sep.witness) throw ConfigurationError("open set condition without a witness");
        return constants.c * sep.witness->r0 / 2.0;
    }
    try {
        return check_separation(system, depth).c_gap;
    } catch (const SeparationViolation& e) {
        throw ConfigurationError(std::string("strong separation fails: ") + e.what());
    }
}

namespace {

Lemma2Result lemma2_prefixes(const IfsSystem& system, const Point& y, const std::vector<Word>& prefixes, double b) {
    Lemma2Result out;
    double last = std::numeric_limits<double>::infinity();
    for (const auto& j : prefixes) {
        double e = system.cylinder_diameter(j);
        if (!(e < last)) throw NumericError("prefix diameters are not strictly decreasing");
        last = e;
        if (check_exclusion(system, y, b * e, j) == Exclusion::Holds) out.verified.push_back(j);
        else out.skipped.push_back(j);
    }
    return out;
}

} // namespace

Lemma2Result lemma2_indices(const IfsSystem& system, const Word& y_address, std::size_t count, double b) {
    if (y_address.size() < count) throw ConfigurationError("address shorter than the requested index count");
    std::vector<Word> prefixes;
    for (std::size_t k = 1; k <= count; ++k) prefixes.push_back(y_address.prefix(k));
    return lemma2_prefixes(system, system.point(y_address), prefixes, b);
}

Lemma2Result lemma2_indices(const IfsSystem& system, const InfiniteWord& y_address, std::size_t count, double b) {
    std::vector<Word> prefixes;
    for (std::size_t k = 1; k <= count; ++k) prefixes.push_back(y_address.take(k));
    return lemma2_prefixes(system, system.point(y_address), prefixes, b);
}

AddressMap conjugate_map(const AddressMap& h, const Word& i, const Word& j) {
    return [h, i, j](const InfiniteWord& a) {
        InfiniteWord beta = h(a.prepend(i));
        if (!beta.starts_with(j))
            throw DomainError("image " + beta.str() + " leaves the target cylinder " + j.str());
        return beta.drop(j.size());
    };
}

Thm1Result thm1_construct(const IfsSystem& src, const IfsSystem& dst, const AddressTransducer& h,
                          const ExtensionConfig& cfg) {
    return thm1_construct(src, dst, h.domain(), h.as_map(), cfg);
}

Thm1Result thm1_construct(const IfsSystem& src, const IfsSystem& dst, const SymbolicSubset& subset,
                          const AddressMap& h, const ExtensionConfig& cfg) {
    if (cfg.schedule.empty()) throw ConfigurationError("empty k schedule");
    for (std::size_t n = 0; n < cfg.schedule.size(); ++n)
        if (cfg.schedule[n] < 1 || (n && cfg.schedule[n] <= cfg.schedule[n - 1]))
            throw ConfigurationError("k schedule must be positive and increasing");
    if (!(cfg.delta > 0.0)) throw ConfigurationError("net mesh must be positive");

    Thm1Result R;
    stage("dimension gate", [&] {
        R.s_source = moran_dimension(src, src.is_similarity() ? 1 : 8);
        R.s_target = moran_dimension(dst, dst.is_similarity() ? 1 : 8);
        if (!(std::abs(R.s_source.s - R.s_target.s) < cfg.tol_dim))
            throw ConstructionError("dimension gate", "dimensions differ: " + format_double(R.s_source.s) + " vs " +
                                                          format_double(R.s_target.s));
    });
    stage("constants", [&] {
        R.source_constants = estimate_constants(src, cfg.certify_depth, cfg.seed);
        R.target_constants = estimate_constants(dst, cfg.certify_depth, cfg.seed + 1);
        R.matched = match_constants(R.source_constants, R.target_constants);
    });
    stage("oracle", [&] {
        R.oracle = map_bilip_estimate(src, dst, subset, h, cfg.oracle_depth);
        R.oracle_deep = map_bilip_estimate(src, dst, subset, h, cfg.oracle_depth + 2);
        double a = R.oracle.L_high(), b = R.oracle_deep.L_high();
        if (!std::isfinite(a) || !std::isfinite(b) || std::abs(a - b) > 0.1 * std::max(a, b))
            throw ConstructionError("oracle", "map is not bilipschitz at the oracle depth: L_high " +
                                                  format_double(a) + " at depth " +
                                                  std::to_string(cfg.oracle_depth) + ", " + format_double(b) +
                                                  " at depth " + std::to_string(cfg.oracle_depth + 2));
        R.L = std::max(a, b);
    });
    stage("witness", [&] {
        R.x_address = InfiniteWord::periodic(cfg.witness);
        if (!subset.contains(R.x_address))
            throw ConstructionError("witness", "witness " + R.x_address.str() + " is outside the subset");
        R.y_address = h(R.x_address);
        R.x = src.point(R.x_address);
        R.y = dst.point(R.y_address);
    });
    const Constants& K = R.matched;
    stage("lemma2", [&] {
        R.b = cfg.ball_constant ? *cfg.ball_constant : lemma2_ball_constant(dst, R.target_constants);
        if (!(R.b > 0.0)) throw ConstructionError("lemma2", "ball constant must be positive");
        R.lemma2 = lemma2_indices(dst, R.y_address, static_cast<std::size_t>(cfg.schedule.back()), R.b);
    });
    R.L_prime = std::max(K.C * R.b / K.c, K.C * K.C * R.L * R.L / (K.c * R.b));

    Net whole_net = build_net(src, SymbolicSubset::whole(), cfg.delta);
    R.source_mesh = whole_net.mesh;
    std::set<Word> skipped(R.lemma2.skipped.begin(), R.lemma2.skipped.end());

    for (int k : cfg.schedule) {
        Thm1Step st;
        st.k = k;
        st.j = R.y_address.take(static_cast<std::size_t>(k));
        if (skipped.count(st.j)) continue;
        st.e_j = dst.cylinder_diameter(st.j);
        st.bound = R.b * st.e_j;
        st.i = stage("index", [&] { return shortest_index(src, R.x_address, R.L, st.bound, K.C); });
        st.d_i = src.cylinder_diameter(st.i);
        st.upper_slack = 1.0 - R.L * st.d_i / st.bound;
        st.lower_slack = st.i.empty() ? 0.0 : st.d_i * K.C * R.L / st.bound - 1.0;
        if (st.upper_slack < -kTolGeom || st.lower_slack < -kTolGeom)
            throw ConstructionError("index", "index bounds fail at k=" + std::to_string(k));

        SymbolicSubset A = subset.pull_back(st.i);
        if (A.empty())
            throw ConstructionError("pull-back", "A_k is empty at k=" + std::to_string(k) + " (i_k = " + st.i.str() + ")");
        Net net = build_net(src, A, cfg.delta);
        MapTable table;
        table.label = "h_k" + std::to_string(k);
        table.mesh = net.mesh;
        table.claimed_bound = R.L_prime;
        stage("image", [&] {
            for (std::size_t n = 0; n < net.words.size(); ++n) {
                InfiniteWord alpha{net.words[n], Word{1}};
                InfiniteWord beta = h(alpha.prepend(st.i));
                if (!beta.starts_with(st.j))
                    throw ConstructionError("image", "image " + beta.str() + " leaves F_j for j = " + st.j.str());
                double offset = distance(dst.point(beta), R.y) / st.bound;
                st.image_radius = std::max(st.image_radius, offset);
                table.sources.push_back(net.points[n]);
                table.images.push_back(dst.point(beta.drop(st.j.size())));
                table.provenance.push_back(net.words[n].str());
            }
        });
        if (st.image_radius > 1.0 + kTolGeom)
            throw ConstructionError("image", "image leaves B(y, b e_j) at k=" + std::to_string(k));
        st.net_size = table.size();
        RatioBounds rb = stage("certify", [&] { return table.ratios(); });
        st.L_low = rb.L_low();
        st.L_high = rb.L_high();
        if (!(st.L_high <= R.L_prime * (1.0 + kTolGeom)))
            throw ConstructionError("certify", "table constant " + format_double(st.L_high) + " exceeds " +
                                                   format_double(R.L_prime) + " at k=" + std::to_string(k));
        st.density_gap = max_nearest_distance(whole_net.points, net.points);
        if (!R.steps.empty() && st.density_gap > R.steps.back().density_gap + kTolGeom * whole_net.mesh)
            throw ConstructionError("density", "A_k density diagnostic increased at k=" + std::to_string(k));
        R.steps.push_back(st);
        R.tables.push_back(std::move(table));
    }
    if (R.tables.empty()) throw ConstructionError("lemma2", "no scheduled index passed the exclusion check");
    return R;
}

LimitResult extract_limit(const std::vector<MapTable>& tables, double eps) {
    if (tables.size() < 2) throw ConfigurationError("limit extraction needs at least two tables");
    LimitResult out;
    out.epsilon = eps;

    // Common provenance keys, in the order of the last table.
    std::vector<std::map<std::string, std::size_t>> index(tables.size());
    for (std::size_t t = 0; t < tables.size(); ++t)
        for (std::size_t n = 0; n < tables[t].size(); ++n) index[t].emplace(tables[t].provenance[n], n);
    std::vector<std::string> keys;
    for (const auto& key : tables.back().provenance) {
        bool everywhere = true;
        for (const auto& ix : index) everywhere = everywhere && ix.count(key);
        if (everywhere) keys.push_back(key);
    }
    if (keys.empty()) {
        out.message = "tables share no net points";
        return out;
    }
    const std::size_t T = tables.size();
    out.sup_distance.assign(T, std::vector<double>(T, 0.0));
    for (std::size_t a = 0; a < T; ++a) {
        for (std::size_t b = a + 1; b < T; ++b) {
            double sup = 0.0;
            for (const auto& key : keys)
                sup = std::max(sup, distance(tables[a].images[index[a][key]], tables[b].images[index[b][key]]));
            out.sup_distance[a][b] = out.sup_distance[b][a] = sup;
        }
    }
    auto close = [&](std::size_t a, std::size_t b) { return out.sup_distance[a][b] <= eps; };

    for (std::size_t start = 0; start + 1 < T && !out.tail_start; ++start) {
        bool cauchy = true;
        for (std::size_t a = start; a < T && cauchy; ++a)
            for (std::size_t b = a + 1; b < T && cauchy; ++b) cauchy = close(a, b);
        if (cauchy) {
            out.tail_start = start;
            for (std::size_t a = start; a < T; ++a) out.chosen.push_back(a);
        }
    }
    if (!out.tail_start) {
        std::vector<std::size_t> chosen{T - 1};
        for (std::size_t a = T - 1; a-- > 0;) {
            bool fits = true;
            for (std::size_t b : chosen) fits = fits && close(a, b);
            if (fits) chosen.push_back(a);
        }
        std::sort(chosen.begin(), chosen.end());
        if (chosen.size() < 2) {
            out.message = "no eps-Cauchy subsequence found; the greedy selection may miss one on adversarial input";
            return out;
        }
        out.chosen = chosen;
    }

    const MapTable& last = tables[out.chosen.back()];
    const auto& ix = index[out.chosen.back()];
    out.table.label = "limit";
    out.table.mesh = last.mesh;
    for (const auto& key : keys) {
        std::size_t n = ix.at(key);
        out.table.sources.push_back(last.sources[n]);
        out.table.images.push_back(last.images[n]);
        out.table.provenance.push_back(key);
    }
    double max_input = 0.0;
    for (const auto& t : tables) max_input = std::max(max_input, t.ratios().L_high());
    RatioBounds rb = out.table.ratios();
    out.L_low = rb.L_low();
    out.L_high = rb.L_high();
    out.table.claimed_bound = max_input;
    if (!(out.L_high <= max_input * (1.0 + kTolGeom))) {
        out.message = "limit constant exceeds every input constant";
        return out;
    }
    out.converged = true;
    out.message = out.tail_start ? "eps-Cauchy tail" : "greedy subsequence";
    return out;
}

} // namespace lipext
