#pragma once

#include <cstdint>
#include <vector>

#include "lipext/ifs_system.hpp"

namespace lipext {

struct DimensionEstimate {
    double s = 0.0;
    int depth = 0;
    double residual = 0.0;
    double s_lo = 0.0;
    double s_hi = 0.0;
};

// Similarities: bisection on sum r_i^s = 1 over (0, n]. Moebius systems: the root of
// sum_{|w|=k+1} d_w^s = sum_{|w|=k} d_w^s at k = depth and k = depth + 2; s is the
// deeper root and the bracket spans both.
DimensionEstimate moran_dimension(const IfsSystem& system, int depth = 1);

// Natural measure of E_w. Similarities: prod r_i^s (normalized by sum r_i^s per level).
// Moebius: product of sibling weights d_ui^s / sum_j d_uj^s along w.
double cylinder_measure(const IfsSystem& system, const Word& w, double s);

struct MeasureInterval {
    double lo = 0.0;
    double hi = 0.0;
    // False when L0^depth d(E) >= r/4 and the interval may be wide.
    bool sufficient = true;
};

// lo sums cylinders inside the closed ball; hi adds cylinders of length `depth` that
// meet its boundary.
MeasureInterval ball_measure(const IfsSystem& system, const Point& x, double r, double s, int depth);

// Same enumeration restricted to E \ A, scaled by r^-s.
MeasureInterval density_defect(const IfsSystem& system, const SymbolicSubset& A, const Point& x, double r,
                               double s, int depth);

struct AhlforsReport {
    std::size_t samples = 0;
    double c = 0.0; // min lo / r^s
    double C = 0.0; // max hi / r^s
    Point worst_x;
    double worst_r = 0.0;
};

// Random x = point of a uniform address of length 48 and r log-uniform in
// (L0^10 d(E), d(E)/2); the enumeration depth keeps L0^depth d(E) < r/16.
AhlforsReport ahlfors_check(const IfsSystem& system, double s, std::size_t samples, std::uint64_t seed);

struct DensityCertificate {
    Point x;
    SymbolicSubset subset;
    std::vector<double> radii;
    std::vector<MeasureInterval> defects;
};

// Defects along a strictly decreasing radius schedule.
DensityCertificate density_certificate(const IfsSystem& system, const SymbolicSubset& A, const Point& x,
                                       std::vector<double> radii, double s);

// Smallest depth with L0^depth d(E) < r / factor.
int enumeration_depth(const IfsSystem& system, double r, double factor);

} // namespace lipext
