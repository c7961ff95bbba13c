#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lipext/ifs_system.hpp"

namespace lipext {

// Structural constants of a system, with the pieces they were assembled from.
//
//   c = min(c_metric, c_gap, c_ahlfors / 2, 1/2)
//   C = max(C_metric, C_child, 2 C_ahlfors, 1)
//
// c_metric, C_metric bracket ||Df_w(x)|| / d_w over V; C_child = max d_w / d_wi;
// c_gap is the sibling gap ratio (strong separation only, 1 otherwise);
// c_ahlfors, C_ahlfors bracket mu(B(x, r)) / r^s on sampled balls.
struct Constants {
    double c = 0.0;
    double C = 0.0;
    double K = 1.0;
    double L0 = 0.0;
    double c1 = 0.0;
    double C1 = 0.0;
    double R = 0.0;
    double s = 0.0;

    double c_metric = 0.0;
    double C_metric = 0.0;
    double C_child = 0.0;
    double c_gap = 1.0;
    double c_ahlfors = 0.0;
    double C_ahlfors = 0.0;

    int depth = 0;
    std::uint64_t seed = 0;
    std::size_t words_checked = 0;
    bool exhaustive = false;
};

// Certifies the constants over every word of length <= depth when there are at most
// 2^14 of them, otherwise over 4096 seeded random words. Requires depth >= 1.
Constants estimate_constants(const IfsSystem& system, int depth, std::uint64_t seed = 0);

// Constants valid for both systems at once: smaller c, larger C.
Constants match_constants(const Constants& a, const Constants& b);

struct SeparationReport {
    SeparationMode mode = SeparationMode::Strong;
    int depth = 0;
    // Strong: min over sibling pairs of dist(E_ui, E_uj) / d_u.
    double c_gap = 0.0;
    Word gap_parent;
    Symbol gap_left = 0, gap_right = 0;
    // Open: number of words checked against the exclusion around f_w(x0).
    std::size_t exclusion_checked = 0;
    std::vector<std::string> failures;
    bool passed = false;
};

// Strong mode throws SeparationViolation when two siblings touch. Open mode checks the
// witness geometry and the exclusion (E \ E_w) n B(f_w(x0), c d_w r0) = 0 for every
// |w| <= depth, using `c` (estimated when absent); failures are listed in the report.
SeparationReport check_separation(const IfsSystem& system, int depth, std::optional<double> c = std::nullopt);

struct InequalityCheck {
    std::string name;
    std::size_t samples = 0;
    std::size_t violations = 0;
    // Smallest relative slack observed; negative means violated.
    double worst_margin = 0.0;
    std::string witness;
    bool passed() const { return violations == 0 && samples > 0; }
};

// Sampled checks of the contraction bound, the derivative bracket, the ball inclusion,
// the two-sided metric bound, child diameters, the geometric decay, the Ahlfors
// bracket, bounded distortion and the separation exclusion for the given constants.
std::vector<InequalityCheck> inequality_suite(const IfsSystem& system, const Constants& constants,
                                              std::size_t samples_per_check, std::uint64_t seed);

std::string format_constants(const Constants& k);

} // namespace lipext
