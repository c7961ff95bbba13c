#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "lipext/constants.hpp"
#include "lipext/errors.hpp"
#include "lipext/extension.hpp"
#include "lipext/measure.hpp"
#include "lipext/onto_extension.hpp"
#include "lipext/rational.hpp"
#include "lipext/scenario.hpp"

using namespace lipext;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
        }
    }
    void note(const std::string& text) { detail += (detail.empty() ? "" : "; ") + text; }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

const std::string kDir = fixtures::scenario_dir();

IfsSystem system_file(const std::string& name) { return load_system(kDir + "/systems/" + name + ".json"); }

AddressTransducer transducer_file(const std::string& name, std::size_t in, std::size_t out) {
    return AddressTransducer::load(kDir + "/transducers/" + name + ".txt", in, out);
}

Outcome dimension() {
    Outcome o;
    auto timed = [&](const IfsSystem& E, int depth) {
        auto t0 = std::chrono::steady_clock::now();
        double s = moran_dimension(E, depth).s;
        double t = seconds_since(t0);
        o.require(t < 1.0, E.name() + " took " + fmt(t) + " s");
        return s;
    };
    double cantor = timed(system_file("cantor"), 1);
    double dyadic = timed(system_file("dyadic"), 1);
    double golden = timed(system_file("half_quarter"), 1);
    timed(system_file("moebius_pair"), 8);
    // 2^-s = (sqrt 5 - 1) / 2 solves 2^-s + 4^-s = 1.
    double golden_exact = std::log((1.0 + std::sqrt(5.0)) / 2.0) / std::log(2.0);
    o.require(std::abs(cantor - std::log(2.0) / std::log(3.0)) < 1e-9, "cantor");
    o.require(std::abs(dyadic - 1.0) < 1e-12, "dyadic");
    o.require(std::abs(golden - golden_exact) < 1e-9, "ratios 1/2, 1/4");
    o.note("cantor err " + fmt(std::abs(cantor - std::log(2.0) / std::log(3.0))) + ", dyadic err " +
           fmt(std::abs(dyadic - 1.0)) + ", {1/2,1/4} err " + fmt(std::abs(golden - golden_exact)));
    return o;
}

Outcome inequality_suites() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    std::size_t checks = 0;
    for (const char* name : {"cantor", "dyadic", "moebius_pair"}) {
        auto E = system_file(name);
        auto k = estimate_constants(E, 10, 1);
        for (const auto& c : inequality_suite(E, k, 1000, 2)) {
            ++checks;
            o.require(c.samples >= 1000, std::string(name) + " " + c.name + " sampled " + std::to_string(c.samples));
            o.require(c.passed(), std::string(name) + " " + c.name + " at " + c.witness);
        }
    }
    double t = seconds_since(t0);
    o.require(t < 30.0, "runtime " + fmt(t) + " s");
    o.note(std::to_string(checks) + " checks x 1000 samples at depth 10 in " + fmt(t) + " s");
    return o;
}

Outcome exclusion() {
    Outcome o;
    auto E = system_file("cantor");
    std::size_t words = 0;
    for (std::size_t len = 1; len <= 8; ++len) {
        const std::int64_t N = static_cast<std::int64_t>(std::pow(3.0, double(len)));
        for (const auto& w : words_of_length(2, len)) {
            ++words;
            // f_w(x) = x / N + t / N with t an integer; the fixed point is x = t / (N - 1).
            std::int64_t t = 0;
            for (Symbol s : w.symbols()) t = 3 * t + (s == 2 ? 2 : 0);
            // Exact check in units of 1 / (N (N - 1)): every other level cylinder [a, a + 1] / N
            // (a = left ends of E's level-len intervals) keeps distance >= (1/3)(1/N) from x.
            std::int64_t x = t * N; // x * N (N - 1)
            bool exact_ok = true;
            for (const auto& v : words_of_length(2, len)) {
                if (v == w) continue;
                std::int64_t a = 0;
                for (Symbol s : v.symbols()) a = 3 * a + (s == 2 ? 2 : 0);
                std::int64_t lo = a * (N - 1), hi = (a + 1) * (N - 1);
                std::int64_t gap = x < lo ? lo - x : (x > hi ? x - hi : 0);
                // gap / (N (N - 1)) > (1/3) / N  <=>  3 gap > N - 1
                exact_ok = exact_ok && 3 * gap > N - 1;
            }
            o.require(exact_ok, "exact gap at w=" + w.str());
            Point fp = fixed_point(E, w);
            o.require(check_exclusion(E, fp, E.cylinder_diameter(w) / 3.0, w) == Exclusion::Holds,
                      "check_exclusion at w=" + w.str());
        }
    }
    auto D = system_file("dyadic");
    auto k = estimate_constants(D, 8);
    auto rep = check_separation(D, 8, k.c);
    o.require(rep.passed, "dyadic open set exclusion");
    // B(f_w(1/2), c d_w r0) stays inside the open interval int(E_w) when c r0 < 1/2.
    o.require(k.c * D.separation().witness->r0 < 0.5, "dyadic exact radius");
    o.note(std::to_string(words) + " Cantor words exact and certified; dyadic " +
           std::to_string(rep.exclusion_checked) + " words, c=" + fmt(k.c));
    return o;
}

Outcome into_extension() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    auto S = load_scenario(kDir + "/pair_grouping.thm1.json");
    S.config.certify_depth = 10;
    auto h = *S.transducer;
    h.restrict_to(S.subset);
    auto r = thm1_construct(*S.source, *S.target, h, S.config);
    o.require(r.steps.size() == S.config.schedule.size(), "every k produced a table");
    double first = r.steps.front().L_high;
    for (std::size_t n = 0; n < r.steps.size(); ++n) {
        const auto& st = r.steps[n];
        o.require(std::abs(st.L_high - first) <= 0.1 * std::max(st.L_high, first),
                  "L_high stable at k=" + std::to_string(st.k));
        o.require(st.L_high <= r.L_prime, "certified bound at k=" + std::to_string(st.k));
        if (n) o.require(st.density_gap <= r.steps[n - 1].density_gap, "density monotone at k=" + std::to_string(st.k));
    }
    o.require(r.steps.back().density_gap < r.source_mesh || r.steps.back().density_gap == 0.0,
              "final density gap below the net mesh");
    auto lim = extract_limit(r.tables, 0.01 * S.target->diameter());
    o.require(lim.converged, "extract_limit: " + lim.message);
    auto v = verify_map_table(lim.table, nullptr, 0.0, VerifyMode::Into);
    o.require(v.passed, "verify into: " + v.witness);

    auto I = load_scenario(kDir + "/cantor_identity.thm1.json");
    auto ri = thm1_construct(*I.source, *I.target, *I.transducer, I.config);
    auto li = extract_limit(ri.tables, 0.01 * I.target->diameter());
    o.require(li.converged && li.L_low == 1.0 && li.L_high == 1.0, "identity constants (1,1)");
    double t = seconds_since(t0);
    o.require(t < 120.0, "runtime " + fmt(t) + " s");
    o.note("L_high " + fmt(first) + " for k=" + std::to_string(r.steps.front().k) + ".." +
           std::to_string(r.steps.back().k) + ", L'=" + fmt(r.L_prime) + ", density gap " +
           fmt(r.steps.back().density_gap) + " vs mesh " + fmt(r.source_mesh) + ", limit L_high " +
           fmt(lim.L_high) + ", identity (" + fmt(li.L_low) + "," + fmt(li.L_high) + "), " + fmt(t) + " s");
    return o;
}

Outcome onto_extension() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    auto S = load_scenario(kDir + "/grouping_inverse.thm2.json");
    S.config.certify_depth = 10;
    auto h = *S.transducer;
    h.restrict_to(S.subset);
    auto r = thm2_construct(*S.source, *S.target, h, S.config);
    double worst = 1e300;
    for (const auto& c : r.covers) {
        std::string at = " at k=" + std::to_string(c.k);
        o.require(c.violations.empty() && c.lower_margin > 0.0 && c.upper_margin > 0.0, "sandwich" + at);
        o.require(c.partition.cut.size() == c.m, "partition size" + at);
        worst = std::min({worst, c.lower_margin, c.upper_margin});
    }
    o.require(r.covers.size() == S.config.schedule.size() + static_cast<std::size_t>(S.config.extra_steps),
              "extended schedule covered");
    o.require(r.m == r.m_extended, "m stable under extension");
    auto lim = extract_limit(r.tables, 0.01 * S.target->diameter());
    o.require(lim.converged, "extract_limit: " + lim.message);
    auto v = verify_map_table(lim.table, &r.target_net, 2.0 * r.target_mesh, VerifyMode::Onto);
    o.require(v.passed, "verify onto: " + v.witness);
    double t = seconds_since(t0);
    o.require(t < 180.0, "runtime " + fmt(t) + " s");
    o.note("m=" + std::to_string(r.m) + " (extended " + std::to_string(r.m_extended) + "), worst sandwich margin " +
           fmt(worst) + ", onto gap " + fmt(v.max_target_gap) + " <= " + fmt(2.0 * r.target_mesh) + ", " + fmt(t) +
           " s");
    return o;
}

Outcome oracle() {
    Outcome o;
    auto cantor = system_file("cantor"), ninth = system_file("ninth4");
    struct Case {
        std::string name;
        const IfsSystem* src;
        const IfsSystem* dst;
    };
    std::vector<Case> cases{{"identity", &cantor, &cantor},
                            {"swap", &cantor, &cantor},
                            {"pair_grouping", &cantor, &ninth},
                            {"grouping_inverse", &ninth, &cantor}};
    for (const auto& c : cases) {
        auto h = transducer_file(c.name, c.src->size(), c.dst->size());
        double a = transducer_bilip_estimate(*c.src, *c.dst, h, 8).L_high();
        double b = transducer_bilip_estimate(*c.src, *c.dst, h, 10).L_high();
        o.require(std::abs(a - b) <= 0.1 * std::max(a, b), c.name + " depths disagree");
        o.note(c.name + " " + fmt(a) + "/" + fmt(b));
    }
    auto pg = transducer_file("pair_grouping", 2, 4);
    auto rb = transducer_bilip_estimate(cantor, ninth, pg, 8);
    o.require(std::abs(rb.L_low() - 1.0) < 1e-9 && std::abs(rb.L_high() - 1.0) < 1e-9, "pair grouping is not 1");
    o.note("pair grouping L_low-1=" + fmt(rb.L_low() - 1.0) + " L_high-1=" + fmt(rb.L_high() - 1.0));
    return o;
}

Outcome negative_controls() {
    Outcome o;
    const std::string neg = kDir + "/negative/";
    std::ostringstream log;
    auto tmp = fs::temp_directory_path() / "lipext_acceptance_neg";
    auto a = run_scenario(neg + "dimension_mismatch.thm1.json", {std::nullopt, std::nullopt, (tmp / "a").string()}, log);
    o.require(a.exit_code == 1 && a.stage == "dimension gate", "dimension mismatch gave " + a.stage);
    auto b = run_scenario(neg + "dyadic_ssc.constants.json", {std::nullopt, std::nullopt, (tmp / "b").string()}, log);
    o.require(b.exit_code == 1 && b.stage == "check_separation", "dyadic SSC gave " + b.stage);
    auto c = run_scenario(neg + "compress.thm1.json", {std::nullopt, std::nullopt, (tmp / "c").string()}, log);
    o.require(c.exit_code == 1 && c.stage == "oracle", "compressing transducer gave " + c.stage);
    auto E = system_file("cantor");
    auto h = AddressTransducer::load(neg + "compress.txt", 2, 2);
    double l8 = transducer_bilip_estimate(E, E, h, 8).L_high();
    double l10 = transducer_bilip_estimate(E, E, h, 10).L_high();
    o.require(l10 / l8 > 2.0, "compressing transducer ratio " + fmt(l10 / l8));
    o.note("exit 1 at '" + a.stage + "', '" + b.stage + "', '" + c.stage + "'; L_high(10)/L_high(8) = " +
           fmt(l10 / l8));
    fs::remove_all(tmp);
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Outcome determinism() {
    Outcome o;
    auto tmp = fs::temp_directory_path() / "lipext_acceptance_det";
    fs::remove_all(tmp);
    std::vector<fs::path> scenarios;
    for (const auto& dir : {fs::path(kDir), fs::path(kDir) / "negative"})
        for (const auto& e : fs::directory_iterator(dir))
            if (e.path().extension() == ".json") scenarios.push_back(e.path());
    std::sort(scenarios.begin(), scenarios.end());
    std::size_t files = 0;
    std::ostringstream log;
    for (const auto& s : scenarios) {
        std::string name = s.stem().string();
        auto a = tmp / "a" / name, b = tmp / "b" / name;
        auto ra = run_scenario(s.string(), {std::nullopt, std::nullopt, a.string()}, log);
        auto rb = run_scenario(s.string(), {std::nullopt, std::nullopt, b.string()}, log);
        o.require(ra.exit_code == rb.exit_code, name + " exit codes differ");
        if (!fs::exists(a)) continue;
        for (const auto& e : fs::directory_iterator(a)) {
            if (e.path().extension() != ".csv") continue;
            ++files;
            o.require(slurp(e.path()) == slurp(b / e.path().filename()), name + "/" + e.path().filename().string());
        }
    }
    o.note(std::to_string(scenarios.size()) + " scenarios, " + std::to_string(files) + " CSV files identical");
    fs::remove_all(tmp);
    return o;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"dimension", dimension},
        {"inequality suite", inequality_suites},
        {"separation exclusion", exclusion},
        {"into extension end-to-end", into_extension},
        {"onto extension end-to-end", onto_extension},
        {"oracle equivalence", oracle},
        {"negative controls", negative_controls},
        {"determinism", determinism},
    };
    std::vector<int> selected;
    for (int a = 1; a < argc; ++a) selected.push_back(std::stoi(argv[a]));
    int failures = 0;
    for (std::size_t n = 0; n < criteria.size(); ++n) {
        int id = static_cast<int>(n + 1);
        if (!selected.empty() && std::find(selected.begin(), selected.end(), id) == selected.end()) continue;
        Outcome o;
        try {
            o = criteria[n].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failures;
        std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[n].first << ": "
                  << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
