#include "lipext/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lipext/errors.hpp"
#include "lipext/rational.hpp"

namespace lipext {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------- input

json read_json(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InputError("cannot read " + path.string());
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw InputError(where + ": expected an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw InputError(where + ": unknown key '" + key + "'");
}

double number(const json& j, const std::string& where) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number()) return j.get<double>();
    throw InputError(where + ": expected a number or a \"p/q\" string");
}

Point vector_of(const json& j, const std::string& where) {
    if (!j.is_array()) return {number(j, where)};
    Point p;
    for (const auto& v : j) p.push_back(number(v, where));
    if (p.empty()) throw InputError(where + ": empty vector");
    return p;
}

int integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw InputError(where + ": expected an integer");
    return j.get<int>();
}

Ball ball_of(const json& j, const std::string& where) {
    check_keys(j, {"center", "radius"}, where);
    if (!j.contains("center") || !j.contains("radius")) throw InputError(where + ": needs center and radius");
    return Ball{vector_of(j["center"], where + ".center"), number(j["radius"], where + ".radius")};
}

ConformalMap map_of(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("type")) throw InputError(where + ": map needs a type");
    std::string type = j["type"].get<std::string>();
    if (type == "similarity") {
        check_keys(j, {"type", "ratio", "translation", "orthogonal", "reflect"}, where);
        if (!j.contains("ratio") || !j.contains("translation"))
            throw InputError(where + ": similarity needs ratio and translation");
        double r = number(j["ratio"], where + ".ratio");
        Point t = vector_of(j["translation"], where + ".translation");
        std::vector<double> o;
        if (j.contains("orthogonal")) {
            for (const auto& row : j["orthogonal"]) {
                Point v = vector_of(row, where + ".orthogonal");
                o.insert(o.end(), v.begin(), v.end());
            }
        } else {
            o.assign(t.size() * t.size(), 0.0);
            for (std::size_t k = 0; k < t.size(); ++k) o[k * t.size() + k] = 1.0;
            if (j.value("reflect", false)) o[0] = -1.0;
        }
        return ConformalMap::similarity(r, std::move(o), std::move(t));
    }
    if (type == "moebius") {
        check_keys(j, {"type", "a", "b", "c", "d"}, where);
        for (const char* key : {"a", "b", "c", "d"})
            if (!j.contains(key)) throw InputError(where + ": moebius map needs a, b, c, d");
        return ConformalMap::moebius(number(j["a"], where), number(j["b"], where), number(j["c"], where),
                                     number(j["d"], where));
    }
    throw InputError(where + ": unknown map type '" + type + "'");
}

IfsSystem system_of(const json& j, const std::string& where) {
    check_keys(j, {"name", "maps", "separation", "domain", "diameter"}, where);
    if (!j.contains("maps") || !j["maps"].is_array()) throw InputError(where + ": needs a list of maps");
    std::vector<ConformalMap> maps;
    for (std::size_t k = 0; k < j["maps"].size(); ++k)
        maps.push_back(map_of(j["maps"][k], where + ".maps[" + std::to_string(k) + "]"));
    SeparationSpec sep;
    if (j.contains("separation")) {
        const json& s = j["separation"];
        if (s.is_string() && s.get<std::string>() == "strong") {
            sep.mode = SeparationMode::Strong;
        } else if (s.is_object()) {
            check_keys(s, {"open_set", "x0", "r0"}, where + ".separation");
            if (!s.contains("open_set") || !s.contains("x0") || !s.contains("r0"))
                throw InputError(where + ".separation: open set witness needs open_set, x0, r0");
            sep.mode = SeparationMode::Open;
            sep.witness = OpenSetWitness{ball_of(s["open_set"], where + ".separation.open_set"),
                                         vector_of(s["x0"], where + ".separation.x0"),
                                         number(s["r0"], where + ".separation.r0")};
        } else {
            throw InputError(where + ".separation: expected \"strong\" or an open set witness");
        }
    }
    std::optional<Ball> domain;
    if (j.contains("domain")) domain = ball_of(j["domain"], where + ".domain");
    std::optional<double> diameter;
    if (j.contains("diameter")) diameter = number(j["diameter"], where + ".diameter");
    try {
        return IfsSystem(j.value("name", std::string("system")), std::move(maps), std::move(sep), domain, diameter);
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(where + ": " + e.what());
    }
}

IfsSystem system_ref(const json& j, const fs::path& base, const std::string& where) {
    if (j.is_string()) {
        fs::path p = base / j.get<std::string>();
        return system_of(read_json(p), p.string());
    }
    return system_of(j, where);
}

// ---------------------------------------------------------------- output

std::string field(const std::string& s) { return s.find(',') == std::string::npos ? s : "\"" + s + "\""; }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InputError("cannot write " + path.string());
    os << text;
}

std::string read_text(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InputError("missing artifact " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string mode_name(ScenarioMode m) {
    switch (m) {
    case ScenarioMode::Thm1: return "thm1";
    case ScenarioMode::Thm2: return "thm2";
    case ScenarioMode::Constants: return "constants";
    }
    return "?";
}

RunOutcome classify(const std::exception& e) {
    if (auto c = dynamic_cast<const ConstructionError*>(&e)) return {1, c->stage(), e.what()};
    if (dynamic_cast<const InputError*>(&e)) return {2, "input", e.what()};
    if (dynamic_cast<const SeparationViolation*>(&e)) return {1, "check_separation", e.what()};
    if (dynamic_cast<const CertificationError*>(&e)) return {1, "certification", e.what()};
    if (dynamic_cast<const UnsupportedError*>(&e)) return {1, "preconditions", e.what()};
    if (dynamic_cast<const Error*>(&e)) return {1, "pipeline", e.what()};
    return {1, "internal", e.what()};
}

struct Verdict {
    std::string scenario;
    std::string mode;
    RunOutcome outcome;
    std::vector<std::pair<std::string, std::string>> extra;

    std::string text() const {
        std::ostringstream os;
        os << "scenario = " << scenario << '\n';
        os << "mode = " << mode << '\n';
        os << "status = " << (outcome.exit_code == 0 ? "pass" : "fail") << '\n';
        os << "exit_code = " << outcome.exit_code << '\n';
        os << "stage = " << (outcome.stage.empty() ? "none" : outcome.stage) << '\n';
        if (!outcome.message.empty()) os << "message = " << outcome.message << '\n';
        for (const auto& [k, v] : extra) os << k << " = " << v << '\n';
        return os.str();
    }
};

std::string oracle_csv(int depth, const RatioBounds& a, const RatioBounds& b) {
    std::ostringstream os;
    os << "depth,points,L_low,L_high\n";
    os << depth << ',' << a.points << ',' << format_double(a.L_low()) << ',' << format_double(a.L_high()) << '\n';
    os << depth + 2 << ',' << b.points << ',' << format_double(b.L_low()) << ',' << format_double(b.L_high()) << '\n';
    return os.str();
}

std::string suite_csv(const std::vector<InequalityCheck>& suite) {
    std::ostringstream os;
    os << "check,samples,violations,worst_margin,witness\n";
    for (const auto& c : suite)
        os << c.name << ',' << c.samples << ',' << c.violations << ',' << format_double(c.worst_margin) << ','
           << field(c.witness) << '\n';
    return os.str();
}

std::string sup_csv(const std::vector<int>& ks, const LimitResult& lim) {
    std::ostringstream os;
    os << "k";
    for (int k : ks) os << ",k" << k;
    os << '\n';
    for (std::size_t a = 0; a < lim.sup_distance.size(); ++a) {
        os << ks[a];
        for (double v : lim.sup_distance[a]) os << ',' << format_double(v);
        os << '\n';
    }
    return os.str();
}

std::string convergence_csv(const std::vector<int>& ks, const std::vector<MapTable>& tables, const LimitResult& lim) {
    std::ostringstream os;
    os << "k,sup_distance_to_limit,L_high\n";
    std::size_t last = lim.chosen.empty() ? tables.size() - 1 : lim.chosen.back();
    for (std::size_t t = 0; t < tables.size(); ++t)
        os << ks[t] << ',' << format_double(lim.sup_distance.empty() ? 0.0 : lim.sup_distance[t][last]) << ','
           << format_double(tables[t].ratios().L_high()) << '\n';
    return os.str();
}

std::string chosen_str(const std::vector<int>& ks, const std::vector<std::size_t>& chosen) {
    std::string s;
    for (std::size_t n = 0; n < chosen.size(); ++n) s += (n ? "," : "") + std::to_string(ks[chosen[n]]);
    return s;
}

// Constants, separation and inequality suite for one system; text goes to `out`.
RunOutcome constants_stage(const IfsSystem& system, int depth, std::uint64_t seed, std::size_t samples,
                           std::string& constants_text, std::string& separation_text, std::string& suite_text) {
    Constants k;
    try {
        k = estimate_constants(system, depth, seed);
    } catch (const SeparationViolation& e) {
        return {1, "check_separation", e.what()};
    } catch (const CertificationError& e) {
        return {1, "estimate_constants", e.what()};
    }
    constants_text = format_constants(k);
    SeparationReport sep = check_separation(system, std::min(depth, 8), k.c);
    std::ostringstream ss;
    ss << "mode = " << (sep.mode == SeparationMode::Strong ? "strong" : "open") << '\n';
    ss << "depth = " << sep.depth << '\n';
    if (sep.mode == SeparationMode::Strong) ss << "c_gap = " << format_double(sep.c_gap) << '\n';
    else ss << "exclusion_checked = " << sep.exclusion_checked << '\n';
    ss << "passed = " << (sep.passed ? "true" : "false") << '\n';
    for (const auto& f : sep.failures) ss << "failure = " << f << '\n';
    separation_text = ss.str();
    if (!sep.passed) return {1, "check_separation", sep.failures.front()};
    auto suite = inequality_suite(system, k, samples, seed + 17);
    suite_text = suite_csv(suite);
    for (const auto& c : suite)
        if (!c.passed()) return {1, "inequality suite", c.name + " fails: " + c.witness};
    return {0, "", ""};
}

RunOutcome run_constants(const Scenario& S, const fs::path& dir, std::ostream& log) {
    std::string ktext, stext, qtext;
    log << "[constants] " << S.source->name() << " at depth " << S.config.certify_depth << '\n';
    RunOutcome out =
        constants_stage(*S.source, S.config.certify_depth, S.seed, S.suite_samples, ktext, stext, qtext);
    if (!ktext.empty()) write_text(dir / "constants_source.txt", ktext);
    if (!stext.empty()) write_text(dir / "separation.txt", stext);
    if (!qtext.empty()) write_text(dir / "suite.csv", qtext);
    return out;
}

RunOutcome run_thm1(const Scenario& S, const fs::path& dir, std::ostream& log, Verdict& v) {
    AddressTransducer h = *S.transducer;
    h.restrict_to(S.subset);
    log << "[thm1] building h_k for k in schedule\n";
    Thm1Result r = thm1_construct(*S.source, *S.target, h, S.config);
    write_text(dir / "constants_source.txt", format_constants(r.source_constants));
    write_text(dir / "constants_target.txt", format_constants(r.target_constants));
    write_text(dir / "oracle.csv", oracle_csv(S.config.oracle_depth, r.oracle, r.oracle_deep));

    std::vector<int> ks;
    std::ostringstream diag;
    diag << "k,i,j,d_i,e_j,bound,upper_slack,lower_slack,net_size,L_low,L_high,certified_bound,image_radius,"
            "density_gap,mesh\n";
    for (std::size_t t = 0; t < r.steps.size(); ++t) {
        const Thm1Step& st = r.steps[t];
        ks.push_back(st.k);
        write_table_csv((dir / ("table_k" + std::to_string(st.k) + ".csv")).string(), r.tables[t]);
        diag << st.k << ',' << field(st.i.str()) << ',' << field(st.j.str()) << ',' << format_double(st.d_i) << ','
             << format_double(st.e_j) << ',' << format_double(st.bound) << ',' << format_double(st.upper_slack)
             << ',' << format_double(st.lower_slack) << ',' << st.net_size << ',' << format_double(st.L_low) << ','
             << format_double(st.L_high) << ',' << format_double(r.L_prime) << ','
             << format_double(st.image_radius) << ',' << format_double(st.density_gap) << ','
             << format_double(r.tables[t].mesh) << '\n';
    }
    write_text(dir / "diagnostics.csv", diag.str());
    v.extra.push_back({"L", format_double(r.L)});
    v.extra.push_back({"b", format_double(r.b)});
    v.extra.push_back({"L_prime", format_double(r.L_prime)});
    v.extra.push_back({"witness_x", r.x_address.str()});
    v.extra.push_back({"witness_y", r.y_address.str()});
    std::string skipped;
    for (const auto& w : r.lemma2.skipped) skipped += (skipped.empty() ? "" : "; ") + w.str();
    v.extra.push_back({"lemma2_skipped", skipped.empty() ? "none" : skipped});

    if (r.tables.size() < 2) return {1, "limit", "limit extraction needs at least two tables"};
    double eps = S.config.epsilon ? *S.config.epsilon : 0.01 * S.target->diameter();
    LimitResult lim = extract_limit(r.tables, eps);
    write_text(dir / "sup_distance.csv", sup_csv(ks, lim));
    write_text(dir / "convergence.csv", convergence_csv(ks, r.tables, lim));
    v.extra.push_back({"epsilon", format_double(eps)});
    v.extra.push_back({"limit", lim.message});
    if (!lim.converged) return {1, "limit", lim.message};
    v.extra.push_back({"K0", lim.tail_start ? std::to_string(ks[*lim.tail_start]) : "none"});
    v.extra.push_back({"chosen", chosen_str(ks, lim.chosen)});
    write_table_csv((dir / "limit.csv").string(), lim.table);

    VerifyReport rep = verify_map_table(lim.table, nullptr, 0.0, VerifyMode::Into);
    v.extra.push_back({"limit_L_low", format_double(rep.L_low)});
    v.extra.push_back({"limit_L_high", format_double(rep.L_high)});
    v.extra.push_back({"verify_into", rep.passed ? "pass" : "fail"});
    if (!rep.passed) return {1, "verify", rep.witness};
    return {0, "", ""};
}

RunOutcome run_thm2(const Scenario& S, const fs::path& dir, std::ostream& log, Verdict& v) {
    AddressTransducer h = *S.transducer;
    h.restrict_to(S.subset);
    log << "[thm2] building onto maps h_k\n";
    Thm2Result r = thm2_construct(*S.source, *S.target, h, S.config);
    write_text(dir / "constants_matched.txt", format_constants(r.matched));
    write_text(dir / "oracle.csv", oracle_csv(S.config.oracle_depth, r.oracle, r.oracle_deep));
    if (r.into_stage) {
        std::ostringstream os;
        os << "k,i,j,L_high\n";
        for (const auto& st : r.into_stage->steps)
            os << st.k << ',' << field(st.i.str()) << ',' << field(st.j.str()) << ',' << format_double(st.L_high)
               << '\n';
        write_text(dir / "into_stage.csv", os.str());
        v.extra.push_back({"into_stage_k", std::to_string(*r.into_k)});
    }
    write_points_csv((dir / "target_net.csv").string(), r.target_net);

    std::vector<int> ks;
    std::ostringstream diag;
    diag << "k,i,d_i,threshold,m,lower_margin,upper_margin,exact,c2,M1,M2,c3,c4,c5,L_high,certified_bound\n";
    std::size_t t = 0;
    for (const auto& cov : r.covers) {
        write_text(dir / ("cover_k" + std::to_string(cov.k) + ".txt"), format_cover(cov));
        bool scheduled = t < r.tables.size() && r.tables[t].label == "h_k" + std::to_string(cov.k);
        diag << cov.k << ',' << field(cov.i.str()) << ',' << format_double(cov.d_i) << ','
             << format_double(cov.threshold) << ',' << cov.m << ',' << format_double(cov.lower_margin) << ','
             << format_double(cov.upper_margin) << ',' << (cov.exact ? "true" : "false") << ','
             << format_double(cov.partition.c2) << ',' << format_double(cov.M1) << ',' << format_double(cov.M2)
             << ',' << format_double(cov.c3) << ',' << format_double(cov.c4) << ',' << format_double(cov.c5) << ',';
        if (scheduled) {
            ks.push_back(cov.k);
            write_table_csv((dir / ("table_k" + std::to_string(cov.k) + ".csv")).string(), r.tables[t]);
            diag << format_double(r.table_L_high[t]) << ',' << format_double(*r.tables[t].claimed_bound);
            ++t;
        } else {
            diag << ',';
        }
        diag << '\n';
    }
    write_text(dir / "diagnostics.csv", diag.str());
    v.extra.push_back({"L", format_double(r.L)});
    v.extra.push_back({"m", std::to_string(r.m)});
    v.extra.push_back({"m_extended", std::to_string(r.m_extended)});
    v.extra.push_back({"c2", format_double(r.c2)});
    v.extra.push_back({"L_prime", format_double(r.L_prime)});

    if (r.tables.size() < 2) return {1, "limit", "limit extraction needs at least two tables"};
    double eps = S.config.epsilon ? *S.config.epsilon : 0.01 * S.target->diameter();
    LimitResult lim = extract_limit(r.tables, eps);
    write_text(dir / "sup_distance.csv", sup_csv(ks, lim));
    write_text(dir / "convergence.csv", convergence_csv(ks, r.tables, lim));
    v.extra.push_back({"epsilon", format_double(eps)});
    v.extra.push_back({"limit", lim.message});
    if (!lim.converged) return {1, "limit", lim.message};
    v.extra.push_back({"K0", lim.tail_start ? std::to_string(ks[*lim.tail_start]) : "none"});
    v.extra.push_back({"chosen", chosen_str(ks, lim.chosen)});
    write_table_csv((dir / "limit.csv").string(), lim.table);

    double onto_eps = 2.0 * r.target_mesh;
    VerifyReport rep = verify_map_table(lim.table, &r.target_net, onto_eps, VerifyMode::Onto);
    v.extra.push_back({"onto_epsilon", format_double(onto_eps)});
    v.extra.push_back({"limit_L_low", format_double(rep.L_low)});
    v.extra.push_back({"limit_L_high", format_double(rep.L_high)});
    v.extra.push_back({"max_target_gap", format_double(rep.max_target_gap)});
    v.extra.push_back({"verify_onto", rep.passed ? "pass" : "fail"});
    if (!rep.passed) return {1, "verify", rep.witness};
    return {0, "", ""};
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto eq = line.find(" = ");
        if (eq != std::string::npos) out.emplace(line.substr(0, eq), line.substr(eq + 3));
    }
    return out;
}

} // namespace

IfsSystem load_system(const std::string& path) { return system_of(read_json(path), path); }

Scenario load_scenario(const std::string& path) {
    json j = read_json(path);
    const fs::path base = fs::path(path).parent_path();
    check_keys(j,
               {"name", "mode", "seed", "source", "target", "subset", "transducer", "schedule", "delta", "epsilon",
                "ball_constant", "witness", "oracle_depth", "depth", "suite_samples", "extra_steps"},
               path);
    Scenario S;
    S.name = j.value("name", fs::path(path).stem().string());
    if (!j.contains("mode") || !j["mode"].is_string()) throw InputError(path + ": missing mode");
    std::string mode = j["mode"].get<std::string>();
    if (mode == "thm1") S.mode = ScenarioMode::Thm1;
    else if (mode == "thm2") S.mode = ScenarioMode::Thm2;
    else if (mode == "constants") S.mode = ScenarioMode::Constants;
    else throw InputError(path + ": unknown mode '" + mode + "'");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw InputError(path + ": seed must be a non-negative integer");
        S.seed = j["seed"].get<std::uint64_t>();
    }
    if (!j.contains("source")) throw InputError(path + ": missing source system");
    S.source = system_ref(j["source"], base, path + ".source");
    ExtensionConfig& cfg = S.config;
    if (j.contains("depth")) cfg.certify_depth = integer(j["depth"], path + ".depth");
    if (cfg.certify_depth < 1) throw InputError(path + ": depth must be >= 1");
    if (j.contains("suite_samples")) S.suite_samples = static_cast<std::size_t>(integer(j["suite_samples"], path));
    cfg.seed = S.seed;
    if (S.mode == ScenarioMode::Constants) return S;

    if (!j.contains("target")) throw InputError(path + ": missing target system");
    S.target = system_ref(j["target"], base, path + ".target");
    try {
        if (j.contains("subset")) {
            std::vector<Word> words;
            for (const auto& w : j["subset"]) words.push_back(Word::parse(w.get<std::string>()));
            S.subset = SymbolicSubset(std::move(words), S.source->size());
        }
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(path + ".subset: " + e.what());
    }
    if (!j.contains("transducer")) throw InputError(path + ": missing transducer");
    try {
        const json& t = j["transducer"];
        if (t.is_string())
            S.transducer = AddressTransducer::load((base / t.get<std::string>()).string(), S.source->size(),
                                                   S.target->size());
        else if (t.is_object() && t.contains("text"))
            S.transducer = AddressTransducer::parse(t["text"].get<std::string>(), S.source->size(), S.target->size());
        else
            throw InputError(path + ": transducer must be a path or {\"text\": ...}");
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(path + ".transducer: " + e.what());
    }
    if (!j.contains("schedule") || !j["schedule"].is_array() || j["schedule"].empty())
        throw InputError(path + ": needs a non-empty schedule");
    for (const auto& k : j["schedule"]) cfg.schedule.push_back(integer(k, path + ".schedule"));
    for (std::size_t n = 0; n < cfg.schedule.size(); ++n)
        if (cfg.schedule[n] < 1 || (n && cfg.schedule[n] <= cfg.schedule[n - 1]))
            throw InputError(path + ": schedule must be positive and strictly increasing");
    if (j.contains("delta")) cfg.delta = number(j["delta"], path + ".delta");
    if (!(cfg.delta > 0.0)) throw InputError(path + ": delta must be positive");
    if (j.contains("epsilon")) cfg.epsilon = number(j["epsilon"], path + ".epsilon");
    if (j.contains("ball_constant")) cfg.ball_constant = number(j["ball_constant"], path + ".ball_constant");
    if (j.contains("witness")) cfg.witness = Word::parse(j["witness"].get<std::string>());
    if (cfg.witness.empty()) throw InputError(path + ": witness word must be nonempty");
    for (Symbol s : cfg.witness.symbols())
        if (s < 1 || s > S.source->size()) throw InputError(path + ": witness symbol outside the source alphabet");
    if (j.contains("oracle_depth")) cfg.oracle_depth = integer(j["oracle_depth"], path + ".oracle_depth");
    if (cfg.oracle_depth < 2) throw InputError(path + ": oracle_depth must be >= 2");
    if (j.contains("extra_steps")) cfg.extra_steps = integer(j["extra_steps"], path + ".extra_steps");
    return S;
}

RunOutcome run_scenario(const std::string& path, const RunOptions& opts, std::ostream& log) {
    Scenario S;
    try {
        S = load_scenario(path);
    } catch (const std::exception& e) {
        return classify(e);
    }
    if (opts.seed) S.seed = S.config.seed = *opts.seed;
    if (opts.depth) {
        if (*opts.depth < 1) return {2, "input", "depth must be >= 1"};
        S.config.certify_depth = *opts.depth;
    }
    fs::path dir = opts.out_dir.empty() ? fs::path("lipext-out") / S.name : fs::path(opts.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) return {2, "input", "cannot create output directory " + dir.string()};

    Verdict v{S.name, mode_name(S.mode), {}, {}};
    v.extra.push_back({"seed", std::to_string(S.seed)});
    try {
        switch (S.mode) {
        case ScenarioMode::Constants: v.outcome = run_constants(S, dir, log); break;
        case ScenarioMode::Thm1: v.outcome = run_thm1(S, dir, log, v); break;
        case ScenarioMode::Thm2: v.outcome = run_thm2(S, dir, log, v); break;
        }
    } catch (const std::exception& e) {
        v.outcome = classify(e);
    }
    write_text(dir / "verdict.txt", v.text());
    write_text(dir / "summary.txt", emit_report(dir.string()));
    log << "[" << v.mode << "] " << (v.outcome.exit_code == 0 ? "pass" : "fail");
    if (!v.outcome.stage.empty()) log << " at " << v.outcome.stage << ": " << v.outcome.message;
    log << '\n';
    return v.outcome;
}

std::string emit_report(const std::string& dir_name) {
    fs::path dir(dir_name);
    if (!fs::is_directory(dir)) throw InputError("not a run directory: " + dir_name);
    auto verdict = parse_kv(read_text(dir / "verdict.txt"));
    const std::string mode = verdict.count("mode") ? verdict["mode"] : "";
    const bool pass = verdict["status"] == "pass";

    std::vector<std::string> constants_files, tables;
    if (mode == "thm1") constants_files = {"constants_source.txt", "constants_target.txt"};
    else if (mode == "thm2") constants_files = {"constants_matched.txt"};
    else if (mode == "constants") constants_files = {"constants_source.txt"};
    else throw InputError("verdict.txt names no known mode");
    if (mode != "constants") tables = {"diagnostics.csv", "convergence.csv"};
    else tables = {"separation.txt", "suite.csv"};

    std::ostringstream os;
    os << "run: " << verdict["scenario"] << '\n';
    os << "mode: " << mode << '\n';
    os << "status: " << verdict["status"];
    if (!pass) os << " (stage: " << verdict["stage"] << ")";
    os << "\n\n== verdict ==\n" << read_text(dir / "verdict.txt");
    for (const auto& f : constants_files) {
        if (!pass && !fs::exists(dir / f)) continue;
        os << "\n== " << f << " ==\n" << read_text(dir / f);
    }
    for (const auto& f : tables) {
        if (!pass && !fs::exists(dir / f)) continue;
        os << "\n== " << f << " ==\n" << read_text(dir / f);
    }
    if (pass && mode != "constants" && !fs::exists(dir / "limit.csv")) throw InputError("missing artifact limit.csv");
    return os.str();
}

RunOutcome constants_report(const std::string& system_path, int depth, std::uint64_t seed, std::size_t samples,
                            std::ostream& out) {
    try {
        IfsSystem system = load_system(system_path);
        std::string k, s, q;
        RunOutcome r = constants_stage(system, depth, seed, samples, k, s, q);
        out << "system = " << system.name() << '\n' << k << s;
        if (!q.empty()) out << q;
        out << "status = " << (r.exit_code == 0 ? "pass" : "fail") << '\n';
        if (r.exit_code != 0) out << "stage = " << r.stage << "\nmessage = " << r.message << '\n';
        return r;
    } catch (const std::exception& e) {
        return classify(e);
    }
}

} // namespace lipext
