#pragma once

#include <optional>
#include <variant>
#include <vector>

namespace lipext {

using Point = std::vector<double>;

double distance(const Point& a, const Point& b);

// Closed Euclidean ball; in one dimension the interval [center - radius, center + radius].
struct Ball {
    Point center;
    double radius = 0.0;

    bool contains(const Point& x, double tol = 0.0) const;
    bool contains(const Ball& other, double tol = 0.0) const;
    // Lower bound on the distance from x to any point of the ball.
    double gap_to(const Point& x) const;
    double gap_to(const Ball& other) const;
};

// x -> ratio * orthogonal * x + translation. `orthogonal` is row-major n x n.
struct Similarity {
    double ratio = 1.0;
    std::vector<double> orthogonal;
    Point translation;
};

// x -> (a x + b) / (c x + d) on the real line.
struct Moebius1D {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
};

// A generator f_i, or a composition of generators (the families are closed under
// composition and inversion; 1-D similarities promote to Moebius maps when mixed).
class ConformalMap {
public:
    static ConformalMap similarity(double ratio, std::vector<double> orthogonal, Point translation);
    static ConformalMap similarity_1d(double ratio, double translation, bool reflect = false);
    static ConformalMap moebius(double a, double b, double c, double d);
    static ConformalMap identity(int dim);

    int dim() const;
    bool is_similarity() const { return std::holds_alternative<Similarity>(rep_); }
    const Similarity* as_similarity() const { return std::get_if<Similarity>(&rep_); }
    const Moebius1D* as_moebius() const { return std::get_if<Moebius1D>(&rep_); }

    Point operator()(const Point& x) const;
    double apply(double x) const; // one-dimensional fast path
    double derivative_norm(const Point& x) const;

    // this o inner
    ConformalMap compose(const ConformalMap& inner) const;
    ConformalMap inverse() const;

    // Exact image of a ball (an interval in 1-D). Throws ConfigurationError if a
    // Moebius pole lies in the ball.
    Ball image(const Ball& ball) const;
    double min_derivative(const Ball& ball) const;
    double max_derivative(const Ball& ball) const;
    std::optional<double> pole() const;

private:
    explicit ConformalMap(Similarity s) : rep_(std::move(s)) {}
    explicit ConformalMap(Moebius1D m) : rep_(m) {}
    Moebius1D to_moebius() const;

    std::variant<Similarity, Moebius1D> rep_;
};

// Domain-checked evaluation: throws DomainError when x is outside V.
Point evaluate(const ConformalMap& f, const Ball& domain, const Point& x);
// Throws DomainError outside V and ConfigurationError when a pole lies in V.
double derivative_norm(const ConformalMap& f, const Ball& domain, const Point& x);

} // namespace lipext
