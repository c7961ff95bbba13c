#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lipext/ifs_system.hpp"
#include "lipext/map_table.hpp"
#include "lipext/word.hpp"

namespace lipext {

// Symbolic map between address spaces.
using AddressMap = std::function<InfiniteWord(const InfiniteWord&)>;

// Deterministic finite-state transducer from source addresses to target addresses.
//
// Text format, one transition per line:
//   state, in_symbol -> next_state, out_word
// `out_word` is comma separated and may be empty. "initial NAME" selects the start state
// (default: source state of the first transition); "declared_L X" records a claimed
// constant. '#' starts a comment.
class AddressTransducer {
public:
    // Alphabet sizes of 0 are inferred from the transitions.
    static AddressTransducer parse(std::string_view text, std::size_t in_alphabet = 0, std::size_t out_alphabet = 0);
    static AddressTransducer load(const std::string& path, std::size_t in_alphabet = 0, std::size_t out_alphabet = 0);

    void restrict_to(SymbolicSubset domain) { domain_ = std::move(domain); }
    const SymbolicSubset& domain() const { return domain_; }
    std::size_t state_count() const { return names_.size(); }
    std::size_t in_alphabet() const { return in_alphabet_; }
    std::size_t out_alphabet() const { return out_alphabet_; }
    std::optional<double> declared_L() const { return declared_L_; }

    // Output emitted while reading w. Throws DomainError when w misses the domain.
    Word apply(const Word& w) const;
    // Image of an eventually periodic address. Throws DomainError outside the domain.
    InfiniteWord apply(const InfiniteWord& address) const;
    AddressMap as_map() const;

private:
    struct Edge {
        std::size_t to = 0;
        Word out;
        bool defined = false;
    };
    const Edge& step(std::size_t state, Symbol s) const;

    std::vector<std::string> names_;
    std::vector<std::vector<Edge>> delta_;
    std::size_t initial_ = 0;
    std::size_t in_alphabet_ = 0;
    std::size_t out_alphabet_ = 0;
    std::optional<double> declared_L_;
    SymbolicSubset domain_ = SymbolicSubset::whole();
};

// Words of length `depth` inside the subset (subset words longer than depth kept as is).
std::vector<Word> subset_words(const SymbolicSubset& subset, std::size_t alphabet, std::size_t depth);

// Pairwise ratio extremes of h over representatives w.1^inf, |w| = depth, of the domain.
RatioBounds map_bilip_estimate(const IfsSystem& src, const IfsSystem& dst, const SymbolicSubset& domain,
                               const AddressMap& h, int depth);
RatioBounds transducer_bilip_estimate(const IfsSystem& src, const IfsSystem& dst, const AddressTransducer& h,
                                      int depth);

} // namespace lipext
