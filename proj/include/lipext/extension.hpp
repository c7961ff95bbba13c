#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lipext/constants.hpp"
#include "lipext/ifs_system.hpp"
#include "lipext/map_table.hpp"
#include "lipext/measure.hpp"
#include "lipext/symbolic.hpp"
#include "lipext/transducer.hpp"

namespace lipext {

struct ExtensionConfig {
    std::vector<int> schedule;            // increasing k values
    double delta = 1e-3;                  // net mesh
    std::optional<double> epsilon;        // Cauchy tolerance, default 0.01 d(F)
    std::optional<double> ball_constant;  // b, default from the target system
    Word witness{1};                      // x is the fixed point of this word
    int oracle_depth = 8;
    int certify_depth = 10;
    std::uint64_t seed = 0;
    double tol_dim = 1e-6;
    int extra_steps = 2;                  // onto: schedule extension for the m_k check
};

// b = c r0 / 2 under the open set condition, the sibling gap ratio under strong
// separation. Throws ConfigurationError when the system has no usable separation.
double lemma2_ball_constant(const IfsSystem& system, const Constants& constants, int depth = 6);

struct Lemma2Result {
    std::vector<Word> verified;
    std::vector<Word> skipped;
};

// Prefixes j of the address, lengths 1..count, with (F \ F_j) n B(y, b e_j) = 0.
Lemma2Result lemma2_indices(const IfsSystem& system, const Word& y_address, std::size_t count, double b);
Lemma2Result lemma2_indices(const IfsSystem& system, const InfiniteWord& y_address, std::size_t count, double b);

struct Thm1Step {
    int k = 0;
    Word i, j;
    double d_i = 0.0, e_j = 0.0;
    double bound = 0.0;       // b e_j
    double upper_slack = 0.0; // 1 - L d_i / (b e_j)
    double lower_slack = 0.0; // d_i (C L) / (b e_j) - 1
    std::size_t net_size = 0;
    double L_low = 0.0, L_high = 0.0;
    double image_radius = 0.0; // max |h(f_i(a)) - y| / (b e_j)
    double density_gap = 0.0;  // max over the E-net of the distance to the A_k net
};

struct Thm1Result {
    Constants source_constants, target_constants, matched;
    DimensionEstimate s_source, s_target;
    RatioBounds oracle, oracle_deep;
    double L = 0.0;
    double b = 0.0;
    double L_prime = 0.0;
    InfiniteWord x_address, y_address;
    Point x, y;
    Lemma2Result lemma2;
    double source_mesh = 0.0;
    std::vector<Thm1Step> steps;
    std::vector<MapTable> tables;
};

// Builds h_k = g_{j_k}^-1 o h o f_{i_k} on nets of A_k = f_{i_k}^-1(E' n E_{i_k}).
// Throws ConstructionError naming the failing stage.
Thm1Result thm1_construct(const IfsSystem& src, const IfsSystem& dst, const SymbolicSubset& subset,
                          const AddressMap& h, const ExtensionConfig& cfg);
Thm1Result thm1_construct(const IfsSystem& src, const IfsSystem& dst, const AddressTransducer& h,
                          const ExtensionConfig& cfg);

// Conjugate g_j^-1 o h o f_i as an address map on A = f_i^-1(E' n E_i).
AddressMap conjugate_map(const AddressMap& h, const Word& i, const Word& j);

struct LimitResult {
    bool converged = false;
    MapTable table;
    std::vector<std::size_t> chosen; // indices into the input
    std::optional<std::size_t> tail_start;
    std::vector<std::vector<double>> sup_distance;
    double epsilon = 0.0;
    double L_low = 0.0, L_high = 0.0;
    std::string message;
};

// Restricts the tables to their common provenance keys; takes the longest eps-Cauchy
// tail, or else a greedy subsequence chosen backwards from the last table.
LimitResult extract_limit(const std::vector<MapTable>& tables, double eps);

} // namespace lipext
