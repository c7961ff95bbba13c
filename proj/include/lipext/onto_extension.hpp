#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lipext/extension.hpp"

namespace lipext {

struct CoverReport {
    int k = 0;
    Word i;
    double d_i = 0.0;
    double threshold = 0.0;
    std::vector<Word> words;       // F_{k,l}, lexicographic
    std::vector<double> diameters; // d_{k,l}
    std::size_t m = 0;
    // Smallest relative slack of c (LC)^-1 d_i <= d_{k,l} and of d_{k,l} <= d_i.
    double lower_margin = 0.0;
    double upper_margin = 0.0;
    std::vector<std::string> violations;
    // Images of points outside E_i avoid every cover cylinder.
    bool exact = true;
    Partition partition;
    double M1 = 0.0; // min distance between partition pieces
    double M2 = 0.0; // min distance between cover cylinders / d_i
    double c3 = 0.0, c4 = 0.0, c5 = 0.0;
};

// Maximal target cylinders of diameter < threshold meeting the image points, with the
// diameter sandwich checked against d_i = threshold L / c.
CoverReport cover_image(const IfsSystem& dst, const std::vector<Point>& image_points, double threshold, double L,
                        const Constants& constants);

struct Thm2Result {
    std::optional<Thm1Result> into_stage;
    std::optional<LimitResult> into_limit;
    std::optional<int> into_k; // index used for the conjugate map
    Constants matched;
    RatioBounds oracle, oracle_deep;
    double L = 0.0;
    std::size_t m = 0;          // max m_k over the schedule
    std::size_t m_extended = 0; // max over the schedule plus the extra steps
    double c2 = 0.0;
    double L_prime = 0.0;
    std::vector<CoverReport> covers;
    std::vector<MapTable> tables; // one per scheduled k (extra steps excluded)
    std::vector<double> table_L_high;
    double source_mesh = 0.0;
    double target_mesh = 0.0;
    std::vector<Point> target_net;
};

// Onto construction for a two-map target with strong separation.
Thm2Result thm2_construct(const IfsSystem& src, const IfsSystem& dst, const SymbolicSubset& subset,
                          const AddressMap& h, const ExtensionConfig& cfg);
Thm2Result thm2_construct(const IfsSystem& src, const IfsSystem& dst, const AddressTransducer& h,
                          const ExtensionConfig& cfg);

std::string format_cover(const CoverReport& rep);

} // namespace lipext
