#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lipext {

// 1-based generator index.
using Symbol = std::uint16_t;

// A finite multi-index (i_1, ..., i_k). The composed map is f_{i_1} o ... o f_{i_k},
// so the leftmost symbol is the outermost map.
class Word {
public:
    Word() = default;
    Word(std::initializer_list<Symbol> symbols) : symbols_(symbols) {}
    explicit Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}

    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    Symbol operator[](std::size_t i) const { return symbols_[i]; }
    Symbol back() const { return symbols_.back(); }
    const std::vector<Symbol>& symbols() const { return symbols_; }

    Word prefix(std::size_t k) const;
    Word suffix_from(std::size_t k) const;
    Word child(Symbol s) const;
    Word operator+(const Word& tail) const;
    void push_back(Symbol s) { symbols_.push_back(s); }

    bool is_prefix_of(const Word& other) const;
    bool comparable(const Word& other) const {
        return is_prefix_of(other) || other.is_prefix_of(*this);
    }

    // Lexicographic; a proper prefix sorts before its extensions.
    auto operator<=>(const Word&) const = default;
    bool operator==(const Word&) const = default;

    // "1,2,2"; the empty word serializes as "".
    std::string str() const;
    // Accepts "1,2,2", "", "()" and "(1,2)". Throws InputError.
    static Word parse(std::string_view text);

private:
    std::vector<Symbol> symbols_;
};

// Eventually periodic infinite address prefix . cycle . cycle . ...
struct InfiniteWord {
    Word prefix;
    Word cycle;

    static InfiniteWord periodic(const Word& w) { return {Word{}, w}; }

    Symbol at(std::size_t i) const;
    Word take(std::size_t n) const;
    InfiniteWord drop(std::size_t n) const;
    InfiniteWord prepend(const Word& w) const { return {w + prefix, cycle}; }
    bool starts_with(const Word& w) const;
    std::string str() const; // "1,2(2,1)"
};

// Checks that no word is a prefix of another. Exact, no floating point.
bool pairwise_incomparable(std::span<const Word> words);

// Checks that every infinite sequence over {1..alphabet} has exactly one prefix in
// `words` (a finite tree cut).
bool covers_tree(std::span<const Word> words, std::size_t alphabet);

// A finite tree cut: pairwise incomparable and covering.
class Antichain {
public:
    Antichain() = default;
    // Throws ConfigurationError unless `words` form a tree cut over the alphabet.
    Antichain(std::vector<Word> words, std::size_t alphabet);

    const std::vector<Word>& words() const { return words_; }
    std::size_t size() const { return words_.size(); }

private:
    std::vector<Word> words_;
};

// Finite union of cylinders E_w over pairwise incomparable words.
class SymbolicSubset {
public:
    SymbolicSubset() = default;
    // Throws ConfigurationError if empty, out of alphabet, or comparable words exist.
    SymbolicSubset(std::vector<Word> words, std::size_t alphabet);
    static SymbolicSubset whole() { return SymbolicSubset(std::vector<Word>{Word{}}); }

    const std::vector<Word>& words() const { return words_; }
    bool empty() const { return words_.empty(); }
    bool is_whole() const { return words_.size() == 1 && words_.front().empty(); }

    // E_w is inside the subset.
    bool contains_cylinder(const Word& w) const;
    bool contains(const InfiniteWord& address) const;
    // E_w meets the subset.
    bool meets(const Word& w) const;
    // Symbolic form of f_w^{-1}(subset n E_w). May be empty.
    SymbolicSubset pull_back(const Word& w) const;

    std::string str() const;

private:
    explicit SymbolicSubset(std::vector<Word> words) : words_(std::move(words)) {}
    std::vector<Word> words_;
};

// All words of length exactly `length` over {1..alphabet}, lexicographic.
std::vector<Word> words_of_length(std::size_t alphabet, std::size_t length);

} // namespace lipext
