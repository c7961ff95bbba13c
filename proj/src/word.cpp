#include "lipext/word.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "lipext/errors.hpp"

namespace lipext {

Word Word::prefix(std::size_t k) const {
    k = std::min(k, symbols_.size());
    return Word(std::vector<Symbol>(symbols_.begin(), symbols_.begin() + k));
}

Word Word::suffix_from(std::size_t k) const {
    k = std::min(k, symbols_.size());
    return Word(std::vector<Symbol>(symbols_.begin() + k, symbols_.end()));
}

Word Word::child(Symbol s) const {
    Word out = *this;
    out.symbols_.push_back(s);
    return out;
}

Word Word::operator+(const Word& tail) const {
    Word out = *this;
    out.symbols_.insert(out.symbols_.end(), tail.symbols_.begin(), tail.symbols_.end());
    return out;
}

bool Word::is_prefix_of(const Word& other) const {
    return symbols_.size() <= other.symbols_.size() &&
           std::equal(symbols_.begin(), symbols_.end(), other.symbols_.begin());
}

std::string Word::str() const {
    std::string out;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(symbols_[i]);
    }
    return out;
}

Word Word::parse(std::string_view text) {
    auto strip = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = strip(text);
    if (!text.empty() && text.front() == '(') {
        if (text.back() != ')') throw InputError("unbalanced parenthesis in word '" + std::string(text) + "'");
        text = strip(text.substr(1, text.size() - 2));
    }
    Word out;
    if (text.empty()) return out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        auto piece = strip(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        unsigned value = 0;
        auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
        if (piece.empty() || ec != std::errc() || ptr != piece.data() + piece.size() || value == 0 || value > 65535)
            throw InputError("bad symbol '" + std::string(piece) + "' in word '" + std::string(text) + "'");
        out.push_back(static_cast<Symbol>(value));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

Symbol InfiniteWord::at(std::size_t i) const {
    if (i < prefix.size()) return prefix[i];
    return cycle[(i - prefix.size()) % cycle.size()];
}

Word InfiniteWord::take(std::size_t n) const {
    std::vector<Symbol> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(at(i));
    return Word(std::move(out));
}

InfiniteWord InfiniteWord::drop(std::size_t n) const {
    if (n <= prefix.size()) return {prefix.suffix_from(n), cycle};
    std::size_t shift = (n - prefix.size()) % cycle.size();
    return {Word{}, cycle.suffix_from(shift) + cycle.prefix(shift)};
}

bool InfiniteWord::starts_with(const Word& w) const {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (at(i) != w[i]) return false;
    return true;
}

std::string InfiniteWord::str() const {
    return prefix.str() + "(" + cycle.str() + ")";
}

bool pairwise_incomparable(std::span<const Word> words) {
    std::vector<Word> sorted(words.begin(), words.end());
    std::sort(sorted.begin(), sorted.end());
    // In lexicographic order a word's extensions directly follow it.
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i].is_prefix_of(sorted[i + 1])) return false;
    return true;
}

namespace {

// Words in [lo, hi) all extend `node`; returns whether they cut every ray through node.
bool covers_from(const std::vector<Word>& sorted, std::size_t lo, std::size_t hi, const Word& node,
                 std::size_t alphabet) {
    if (lo == hi) return false;
    if (sorted[lo] == node) return hi - lo == 1;
    std::size_t pos = lo;
    for (Symbol s = 1; s <= alphabet; ++s) {
        Word child = node.child(s);
        std::size_t end = pos;
        while (end < hi && child.is_prefix_of(sorted[end])) ++end;
        if (!covers_from(sorted, pos, end, child, alphabet)) return false;
        pos = end;
    }
    return pos == hi;
}

} // namespace

bool covers_tree(std::span<const Word> words, std::size_t alphabet) {
    std::vector<Word> sorted(words.begin(), words.end());
    std::sort(sorted.begin(), sorted.end());
    for (const auto& w : sorted)
        for (Symbol s : w.symbols())
            if (s < 1 || s > alphabet) return false;
    return covers_from(sorted, 0, sorted.size(), Word{}, alphabet);
}

Antichain::Antichain(std::vector<Word> words, std::size_t alphabet) : words_(std::move(words)) {
    if (!pairwise_incomparable(words_)) throw ConfigurationError("antichain has comparable words");
    if (!covers_tree(words_, alphabet)) throw ConfigurationError("antichain does not cover the tree");
}

SymbolicSubset::SymbolicSubset(std::vector<Word> words, std::size_t alphabet) : words_(std::move(words)) {
    if (words_.empty()) throw ConfigurationError("symbolic subset is empty");
    for (const auto& w : words_)
        for (Symbol s : w.symbols())
            if (s < 1 || s > alphabet)
                throw ConfigurationError("symbol " + std::to_string(s) + " out of alphabet in subset word '" + w.str() + "'");
    if (!pairwise_incomparable(words_)) throw ConfigurationError("subset words are not pairwise incomparable");
    std::sort(words_.begin(), words_.end());
}

bool SymbolicSubset::contains_cylinder(const Word& w) const {
    return std::any_of(words_.begin(), words_.end(), [&](const Word& u) { return u.is_prefix_of(w); });
}

bool SymbolicSubset::contains(const InfiniteWord& address) const {
    return std::any_of(words_.begin(), words_.end(), [&](const Word& u) { return address.starts_with(u); });
}

bool SymbolicSubset::meets(const Word& w) const {
    return std::any_of(words_.begin(), words_.end(), [&](const Word& u) { return u.comparable(w); });
}

SymbolicSubset SymbolicSubset::pull_back(const Word& w) const {
    if (contains_cylinder(w)) return whole();
    std::vector<Word> out;
    for (const auto& u : words_)
        if (w.is_prefix_of(u)) out.push_back(u.suffix_from(w.size()));
    return SymbolicSubset(std::move(out));
}

std::string SymbolicSubset::str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (i) out += "; ";
        out += "(" + words_[i].str() + ")";
    }
    return out + "}";
}

std::vector<Word> words_of_length(std::size_t alphabet, std::size_t length) {
    std::vector<Word> level{Word{}};
    for (std::size_t d = 0; d < length; ++d) {
        std::vector<Word> next;
        next.reserve(level.size() * alphabet);
        for (const auto& w : level)
            for (Symbol s = 1; s <= alphabet; ++s) next.push_back(w.child(s));
        level = std::move(next);
    }
    return level;
}

} // namespace lipext
