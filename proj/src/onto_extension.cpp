#include "lipext/onto_extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lipext/errors.hpp"
#include "lipext/rational.hpp"

namespace lipext {

namespace {

template <class F>
auto stage(const std::string& name, F body) -> decltype(body()) {
    try {
        return body();
    } catch (const ConstructionError&) {
        throw;
    } catch (const InputError&) {
        throw;
    } catch (const UnsupportedError&) {
        throw;
    } catch (const Error& e) {
        throw ConstructionError(name, e.what());
    }
}

double min_pairwise_gap(const IfsSystem& system, const std::vector<Word>& words) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < words.size(); ++a)
        for (std::size_t b = a + 1; b < words.size(); ++b) {
            double scale = std::min(system.cylinder_diameter(words[a]), system.cylinder_diameter(words[b]));
            best = std::min(best, cylinder_distance(system, words[a], words[b], 1e-12 * scale).lo);
        }
    return best;
}

} // namespace

CoverReport cover_image(const IfsSystem& dst, const std::vector<Point>& image_points, double threshold, double L,
                        const Constants& k) {
    if (!(threshold > 0.0) || !(L > 0.0)) throw ConfigurationError("cover threshold and L must be positive");
    if (image_points.empty()) throw ConfigurationError("cover needs at least one image point");
    CoverReport rep;
    rep.threshold = threshold;
    rep.d_i = threshold * L / k.c;
    rep.words = maximal_cylinders_meeting(dst, image_points, threshold);
    rep.m = rep.words.size();
    const double lower = k.c * rep.d_i / (L * k.C);
    rep.lower_margin = std::numeric_limits<double>::infinity();
    rep.upper_margin = std::numeric_limits<double>::infinity();
    for (const auto& w : rep.words) {
        double e = dst.cylinder_diameter(w);
        rep.diameters.push_back(e);
        double lo_slack = e / lower - 1.0;
        double hi_slack = rep.d_i / e - 1.0;
        rep.lower_margin = std::min(rep.lower_margin, lo_slack);
        rep.upper_margin = std::min(rep.upper_margin, hi_slack);
        if (lo_slack < -kTolGeom) rep.violations.push_back("cylinder " + w.str() + " is below c(LC)^-1 d_i");
        if (hi_slack < -kTolGeom) rep.violations.push_back("cylinder " + w.str() + " is above d_i");
    }
    if (rep.m >= 2) rep.M2 = min_pairwise_gap(dst, rep.words) / rep.d_i;
    return rep;
}

Thm2Result thm2_construct(const IfsSystem& src, const IfsSystem& dst, const AddressTransducer& h,
                          const ExtensionConfig& cfg) {
    return thm2_construct(src, dst, h.domain(), h.as_map(), cfg);
}

Thm2Result thm2_construct(const IfsSystem& src, const IfsSystem& dst, const SymbolicSubset& subset,
                          const AddressMap& h, const ExtensionConfig& cfg) {
    if (dst.size() != 2) throw UnsupportedError("onto construction needs a target with exactly two maps");
    if (dst.separation().mode != SeparationMode::Strong)
        throw ConstructionError("separation", "target system must satisfy strong separation");
    if (src.separation().mode != SeparationMode::Strong)
        throw ConstructionError("separation", "source system must satisfy strong separation");
    if (cfg.schedule.empty()) throw ConfigurationError("empty k schedule");

    Thm2Result R;
    AddressMap hat = h;
    if (!subset.is_whole()) {
        R.into_stage = thm1_construct(src, dst, subset, h, cfg);
        double eps = cfg.epsilon ? *cfg.epsilon : 0.01 * dst.diameter();
        R.into_limit = extract_limit(R.into_stage->tables, eps);
        if (!R.into_limit->converged) throw ConstructionError("limit", R.into_limit->message);
        const Thm1Step& st = R.into_stage->steps[R.into_limit->chosen.back()];
        if (!subset.pull_back(st.i).is_whole())
            throw ConstructionError("limit", "A_k does not cover the source attractor at k=" + std::to_string(st.k));
        hat = conjugate_map(h, st.i, st.j);
        R.into_k = st.k;
        R.matched = R.into_stage->matched;
    } else {
        stage("dimension gate", [&] {
            double a = moran_dimension(src, src.is_similarity() ? 1 : 8).s;
            double b = moran_dimension(dst, dst.is_similarity() ? 1 : 8).s;
            if (!(std::abs(a - b) < cfg.tol_dim))
                throw ConstructionError("dimension gate",
                                        "dimensions differ: " + format_double(a) + " vs " + format_double(b));
        });
        stage("constants", [&] {
            R.matched = match_constants(estimate_constants(src, cfg.certify_depth, cfg.seed),
                                        estimate_constants(dst, cfg.certify_depth, cfg.seed + 1));
        });
    }
    stage("separation", [&] { check_separation(dst, std::min(cfg.certify_depth, 8)); });
    stage("oracle", [&] {
        SymbolicSubset whole = SymbolicSubset::whole();
        R.oracle = map_bilip_estimate(src, dst, whole, hat, cfg.oracle_depth);
        R.oracle_deep = map_bilip_estimate(src, dst, whole, hat, cfg.oracle_depth + 2);
        double a = R.oracle.L_high(), b = R.oracle_deep.L_high();
        if (!std::isfinite(a) || !std::isfinite(b) || std::abs(a - b) > 0.1 * std::max(a, b))
            throw ConstructionError("oracle", "map on the source attractor is not bilipschitz at the oracle depth");
        R.L = std::max(a, b);
    });

    const Constants& K = R.matched;
    const double L = R.L;
    const InfiniteWord x = InfiniteWord::periodic(cfg.witness);
    Net enet = build_net(src, SymbolicSubset::whole(), cfg.delta);
    Net fnet = build_net(dst, SymbolicSubset::whole(), cfg.delta);
    R.source_mesh = enet.mesh;
    R.target_mesh = fnet.mesh;
    R.target_net = fnet.points;

    std::vector<int> ks = cfg.schedule;
    for (int e = 1; e <= cfg.extra_steps; ++e) ks.push_back(cfg.schedule.back() + e);

    for (int k : ks) {
        const bool scheduled = std::find(cfg.schedule.begin(), cfg.schedule.end(), k) != cfg.schedule.end();
        const Word i = x.take(static_cast<std::size_t>(k));
        const double d_i = src.cylinder_diameter(i);
        const double threshold = (K.c / L) * d_i;

        std::vector<InfiniteWord> inside(enet.words.size());
        std::vector<Point> image_points(enet.words.size());
        stage("image", [&] {
            for (std::size_t n = 0; n < enet.words.size(); ++n) {
                inside[n] = hat(InfiniteWord{i + enet.words[n], Word{1}});
                image_points[n] = dst.point(inside[n]);
            }
        });
        CoverReport cover = stage("cover", [&] { return cover_image(dst, image_points, threshold, L, K); });
        cover.k = k;
        cover.i = i;
        if (!cover.violations.empty())
            throw ConstructionError("cover", "diameter sandwich fails at k=" + std::to_string(k) + ": " +
                                                 cover.violations.front());
        stage("cover", [&] {
            for (const auto& v : enet.words) {
                if (i.is_prefix_of(v) || v.is_prefix_of(i)) continue;
                InfiniteWord g = hat(InfiniteWord{v, Word{1}});
                for (const auto& w : cover.words)
                    if (g.starts_with(w)) cover.exact = false;
            }
        });
        cover.partition = stage("partition", [&] { return binary_partition(dst, cover.m); });
        const auto& pieces = cover.partition.cut.words();
        if (pieces.size() != cover.m) throw ConstructionError("partition", "piece count differs from m_k");
        cover.M1 = cover.m >= 2 ? min_pairwise_gap(dst, pieces) : 0.0;
        double max_piece = 0.0;
        for (const auto& p : pieces) max_piece = std::max(max_piece, dst.cylinder_diameter(p));
        cover.c3 = 1.0 / (K.C * max_piece);
        cover.c4 = cover.c3 * K.c * K.c * K.R / (L * K.C);
        cover.c5 = L + 1.0 + cover.c3 * K.R;

        if (scheduled) {
            MapTable table;
            table.label = "h_k" + std::to_string(k);
            table.mesh = enet.mesh;
            std::vector<std::size_t> piece_of(enet.words.size());
            stage("routing", [&] {
                for (std::size_t n = 0; n < enet.words.size(); ++n) {
                    const InfiniteWord& beta = inside[n];
                    auto it = std::find_if(cover.words.begin(), cover.words.end(),
                                           [&](const Word& w) { return beta.starts_with(w); });
                    if (it == cover.words.end())
                        throw ConstructionError("routing", "net point " + enet.words[n].str() + " (image " +
                                                               beta.str() + ") lies in no cover cylinder");
                    std::size_t l = static_cast<std::size_t>(it - cover.words.begin());
                    piece_of[n] = l;
                    table.sources.push_back(enet.points[n]);
                    table.images.push_back(dst.point(beta.drop(it->size()).prepend(pieces[l])));
                    table.provenance.push_back(enet.words[n].str());
                }
            });
            const double dF = dst.diameter(), dE = src.diameter();
            double within_up = K.C * K.C * K.C * L * L * dF / (K.c * K.c);
            double within_low = K.c * K.c * cover.partition.c2 / (K.C * L);
            double bound = std::max(within_up, 1.0 / within_low);
            if (cover.m >= 2) bound = std::max({bound, dF * L * K.C / cover.M2, dE / cover.M1});
            table.claimed_bound = bound;
            R.L_prime = std::max(R.L_prime, bound);
            double Lh = stage("certify", [&] { return table.ratios().L_high(); });
            if (!(Lh <= bound * (1.0 + kTolGeom)))
                throw ConstructionError("certify", "table constant " + format_double(Lh) + " exceeds " +
                                                       format_double(bound) + " at k=" + std::to_string(k));
            R.table_L_high.push_back(Lh);
            R.tables.push_back(std::move(table));
            R.m = std::max(R.m, cover.m);
        }
        R.m_extended = std::max(R.m_extended, cover.m);
        R.c2 = R.covers.empty() ? cover.partition.c2 : std::min(R.c2, cover.partition.c2);
        R.covers.push_back(std::move(cover));
    }
    if (R.m_extended != R.m)
        throw ConstructionError("cover", "m_k grows from " + std::to_string(R.m) + " to " +
                                             std::to_string(R.m_extended) + " when the schedule is extended");
    return R;
}

std::string format_cover(const CoverReport& rep) {
    std::ostringstream os;
    os << "k = " << rep.k << '\n';
    os << "i = " << rep.i.str() << '\n';
    os << "d_i = " << format_double(rep.d_i) << '\n';
    os << "threshold = " << format_double(rep.threshold) << '\n';
    os << "m = " << rep.m << '\n';
    os << "cover =";
    for (std::size_t n = 0; n < rep.words.size(); ++n)
        os << (n ? "; " : " ") << '(' << rep.words[n].str() << ") " << format_double(rep.diameters[n]);
    os << '\n';
    os << "sandwich_lower_margin = " << format_double(rep.lower_margin) << '\n';
    os << "sandwich_upper_margin = " << format_double(rep.upper_margin) << '\n';
    os << "exact = " << (rep.exact ? "true" : "false") << '\n';
    os << "partition =";
    const auto& pieces = rep.partition.cut.words();
    for (std::size_t n = 0; n < pieces.size(); ++n) os << (n ? "; " : " ") << '(' << pieces[n].str() << ')';
    os << '\n';
    os << "c2 = " << format_double(rep.partition.c2) << '\n';
    os << "M1 = " << format_double(rep.M1) << '\n';
    os << "M2 = " << format_double(rep.M2) << '\n';
    os << "c3 = " << format_double(rep.c3) << '\n';
    os << "c4 = " << format_double(rep.c4) << '\n';
    os << "c5 = " << format_double(rep.c5) << '\n';
    for (const auto& v : rep.violations) os << "violation = " << v << '\n';
    return os.str();
}

} // namespace lipext
