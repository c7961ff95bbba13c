#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lipext/conformal_map.hpp"

namespace lipext {

struct RatioBounds {
    double min_ratio = 0.0; // min |u - v| / |x - y|
    double max_ratio = 0.0; // max |u - v| / |x - y|
    std::size_t points = 0;
    std::size_t min_pair[2] = {0, 0};
    std::size_t max_pair[2] = {0, 0};

    double L_low() const { return min_ratio; }
    // Bilipschitz constant: max(max ratio, 1 / min ratio).
    double L_high() const;
};

// Exact extremes over all pairs with distinct sources. One-dimensional data use sorted
// adjacent pairs (slopes between far pairs are averages of adjacent slopes); otherwise
// all pairs are compared. Throws DegenerateError for fewer than two distinct sources.
RatioBounds pairwise_ratio_bounds(const std::vector<Point>& sources, const std::vector<Point>& images);

// A finite map sampled on a net: sources[k] -> images[k], tagged by provenance.
struct MapTable {
    std::string label;
    std::vector<Point> sources;
    std::vector<Point> images;
    std::vector<std::string> provenance;
    double mesh = 0.0;
    // Certified bound the table must respect, if any.
    std::optional<double> claimed_bound;

    std::size_t size() const { return sources.size(); }
    RatioBounds ratios() const { return pairwise_ratio_bounds(sources, images); }
};

// Columns x1..xn, y1..yp, provenance; floats in shortest round-trip form.
void write_table_csv(std::ostream& os, const MapTable& table);
void write_table_csv(const std::string& path, const MapTable& table);
MapTable read_table_csv(const std::string& path);

// Point list CSV with columns x1..xn (extra columns are ignored on read).
void write_points_csv(const std::string& path, const std::vector<Point>& points,
                      const std::vector<std::string>& provenance = {});
std::vector<Point> read_points_csv(const std::string& path);

enum class VerifyMode { Into, Onto };

struct VerifyReport {
    VerifyMode mode = VerifyMode::Into;
    bool passed = false;
    double L_low = 0.0;
    double L_high = 0.0;
    // Onto: the largest distance from a target point to the nearest image.
    double max_target_gap = 0.0;
    std::string witness;
};

// Into: every pair of distinct sources has distinct images (and the claimed bound, if
// any, holds). Onto: additionally every target point is within eps of an image.
VerifyReport verify_map_table(const MapTable& table, const std::vector<Point>* target_net, double eps,
                              VerifyMode mode);

std::string format_verdict(const VerifyReport& rep);

} // namespace lipext
