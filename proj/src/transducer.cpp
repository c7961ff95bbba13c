#include "lipext/transducer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "lipext/errors.hpp"
#include "lipext/rational.hpp"

namespace lipext {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

bool has_empty_output_cycle(const std::vector<std::vector<std::size_t>>& empty_edges) {
    // 0 = unvisited, 1 = on stack, 2 = done
    std::vector<int> colour(empty_edges.size(), 0);
    for (std::size_t root = 0; root < empty_edges.size(); ++root) {
        if (colour[root]) continue;
        std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
        colour[root] = 1;
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            if (next < empty_edges[v].size()) {
                std::size_t u = empty_edges[v][next++];
                if (colour[u] == 1) return true;
                if (colour[u] == 0) {
                    colour[u] = 1;
                    stack.push_back({u, 0});
                }
            } else {
                colour[v] = 2;
                stack.pop_back();
            }
        }
    }
    return false;
}

} // namespace

AddressTransducer AddressTransducer::parse(std::string_view text, std::size_t in_alphabet, std::size_t out_alphabet) {
    AddressTransducer t;
    std::map<std::string, std::size_t> index;
    auto state = [&](const std::string& name) {
        auto [it, fresh] = index.emplace(name, t.names_.size());
        if (fresh) t.names_.push_back(name);
        return it->second;
    };
    struct Raw {
        std::size_t from, to;
        Symbol in;
        Word out;
        std::size_t line;
    };
    std::vector<Raw> raws;
    std::optional<std::string> initial;

    std::istringstream is{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string body = trim(line);
        if (body.empty()) continue;
        auto where = [&] { return "transducer line " + std::to_string(lineno); };
        if (body.rfind("initial", 0) == 0 && body.find("->") == std::string::npos) {
            initial = trim(std::string_view(body).substr(7));
            if (initial->empty()) throw InputError(where() + ": missing initial state name");
            continue;
        }
        if (body.rfind("declared_L", 0) == 0) {
            t.declared_L_ = parse_rational(trim(std::string_view(body).substr(10)));
            continue;
        }
        std::size_t arrow = body.find("->");
        std::size_t arrow_len = 2;
        if (arrow == std::string::npos) {
            arrow = body.find("\xE2\x86\x92"); // U+2192
            arrow_len = 3;
        }
        if (arrow == std::string::npos) throw InputError(where() + ": expected 'state, symbol -> state, output'");
        std::string lhs = body.substr(0, arrow);
        std::string rhs = body.substr(arrow + arrow_len);
        std::size_t lc = lhs.find(',');
        if (lc == std::string::npos) throw InputError(where() + ": expected 'state, symbol' before the arrow");
        std::string from = trim(std::string_view(lhs).substr(0, lc));
        Word in = Word::parse(trim(std::string_view(lhs).substr(lc + 1)));
        if (in.size() != 1) throw InputError(where() + ": input must be a single symbol");
        std::size_t rc = rhs.find(',');
        std::string to = trim(std::string_view(rhs).substr(0, rc));
        Word out = rc == std::string::npos ? Word{} : Word::parse(trim(std::string_view(rhs).substr(rc + 1)));
        if (from.empty() || to.empty()) throw InputError(where() + ": empty state name");
        std::size_t f = state(from);
        std::size_t g = state(to);
        raws.push_back({f, g, in[0], std::move(out), lineno});
    }
    if (raws.empty()) throw InputError("transducer has no transitions");

    std::size_t max_in = 0, max_out = 0;
    for (const auto& r : raws) {
        max_in = std::max<std::size_t>(max_in, r.in);
        for (Symbol s : r.out.symbols()) max_out = std::max<std::size_t>(max_out, s);
    }
    t.in_alphabet_ = in_alphabet ? in_alphabet : max_in;
    t.out_alphabet_ = out_alphabet ? out_alphabet : std::max<std::size_t>(max_out, 1);
    if (max_in > t.in_alphabet_)
        throw InputError("transducer reads symbol " + std::to_string(max_in) + " outside the source alphabet");
    if (max_out > t.out_alphabet_)
        throw InputError("transducer writes symbol " + std::to_string(max_out) + " outside the target alphabet");

    t.delta_.assign(t.names_.size(), std::vector<Edge>(t.in_alphabet_));
    for (auto& r : raws) {
        Edge& e = t.delta_[r.from][r.in - 1u];
        if (e.defined)
            throw InputError("transducer line " + std::to_string(r.line) + ": duplicate transition for state '" +
                             t.names_[r.from] + "' on " + std::to_string(r.in));
        e = Edge{r.to, std::move(r.out), true};
    }
    if (initial) {
        auto it = index.find(*initial);
        if (it == index.end()) throw InputError("initial state '" + *initial + "' has no transitions");
        t.initial_ = it->second;
    } else {
        t.initial_ = raws.front().from;
    }

    std::vector<std::vector<std::size_t>> empty_edges(t.names_.size());
    for (std::size_t q = 0; q < t.delta_.size(); ++q)
        for (const auto& e : t.delta_[q])
            if (e.defined && e.out.empty()) empty_edges[q].push_back(e.to);
    if (has_empty_output_cycle(empty_edges))
        throw ConfigurationError("transducer has a cycle of transitions with empty output");
    return t;
}

AddressTransducer AddressTransducer::load(const std::string& path, std::size_t in_alphabet, std::size_t out_alphabet) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InputError("cannot read transducer " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse(ss.str(), in_alphabet, out_alphabet);
}

const AddressTransducer::Edge& AddressTransducer::step(std::size_t state, Symbol s) const {
    if (s < 1 || s > in_alphabet_) throw DomainError("input symbol " + std::to_string(s) + " outside the alphabet");
    const Edge& e = delta_[state][s - 1u];
    if (!e.defined)
        throw DomainError("no transition from state '" + names_[state] + "' on " + std::to_string(s));
    return e;
}

Word AddressTransducer::apply(const Word& w) const {
    if (!domain_.meets(w)) throw DomainError("word " + w.str() + " misses the transducer domain");
    std::size_t q = initial_;
    Word out;
    for (Symbol s : w.symbols()) {
        const Edge& e = step(q, s);
        out = out + e.out;
        q = e.to;
    }
    return out;
}

InfiniteWord AddressTransducer::apply(const InfiniteWord& address) const {
    if (address.cycle.empty()) throw ConfigurationError("infinite address needs a non-empty cycle");
    if (!domain_.contains(address)) throw DomainError("address " + address.str() + " is outside the domain");
    std::size_t q = initial_;
    Word out;
    for (Symbol s : address.prefix.symbols()) {
        const Edge& e = step(q, s);
        out = out + e.out;
        q = e.to;
    }
    // State at the start of each cycle block; a repeat closes the output cycle.
    std::vector<std::size_t> block_state;
    std::vector<std::size_t> block_offset;
    for (;;) {
        auto seen = std::find(block_state.begin(), block_state.end(), q);
        if (seen != block_state.end()) {
            std::size_t start = block_offset[static_cast<std::size_t>(seen - block_state.begin())];
            Word cycle = out.suffix_from(start);
            if (cycle.empty()) throw ConfigurationError("transducer emits nothing along " + address.str());
            return InfiniteWord{out.prefix(start), cycle};
        }
        block_state.push_back(q);
        block_offset.push_back(out.size());
        for (Symbol s : address.cycle.symbols()) {
            const Edge& e = step(q, s);
            out = out + e.out;
            q = e.to;
        }
    }
}

AddressMap AddressTransducer::as_map() const {
    return [t = *this](const InfiniteWord& a) { return t.apply(a); };
}

std::vector<Word> subset_words(const SymbolicSubset& subset, std::size_t alphabet, std::size_t depth) {
    std::vector<Word> out;
    for (const auto& root : subset.words()) {
        if (root.size() >= depth) {
            out.push_back(root);
            continue;
        }
        for (const auto& tail : words_of_length(alphabet, depth - root.size())) out.push_back(root + tail);
    }
    return out;
}

RatioBounds map_bilip_estimate(const IfsSystem& src, const IfsSystem& dst, const SymbolicSubset& domain,
                               const AddressMap& h, int depth) {
    std::vector<Point> xs, ys;
    for (const auto& w : subset_words(domain, src.size(), static_cast<std::size_t>(std::max(depth, 0)))) {
        InfiniteWord a{w, Word{1}};
        xs.push_back(src.point(a));
        ys.push_back(dst.point(h(a)));
    }
    return pairwise_ratio_bounds(xs, ys);
}

RatioBounds transducer_bilip_estimate(const IfsSystem& src, const IfsSystem& dst, const AddressTransducer& h,
                                      int depth) {
    if (depth < 2) throw ConfigurationError("oracle depth must be >= 2");
    return map_bilip_estimate(src, dst, h.domain(), h.as_map(), depth);
}

} // namespace lipext
