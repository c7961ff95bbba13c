#include "lipext/conformal_map.hpp"

#include <algorithm>
#include <cmath>

#include "lipext/errors.hpp"

namespace lipext {

double distance(const Point& a, const Point& b) {
    if (a.size() == 1) return std::abs(a[0] - b[0]);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

bool Ball::contains(const Point& x, double tol) const {
    return distance(center, x) <= radius + tol;
}

bool Ball::contains(const Ball& other, double tol) const {
    return distance(center, other.center) + other.radius <= radius + tol;
}

double Ball::gap_to(const Point& x) const {
    return std::max(0.0, distance(center, x) - radius);
}

double Ball::gap_to(const Ball& other) const {
    return std::max(0.0, distance(center, other.center) - radius - other.radius);
}

namespace {

void normalize(Moebius1D& m) {
    double scale = std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
    m.a /= scale;
    m.b /= scale;
    m.c /= scale;
    m.d /= scale;
}

std::vector<double> matmul(const std::vector<double>& x, const std::vector<double>& y, std::size_t n) {
    std::vector<double> out(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) out[i * n + j] += x[i * n + k] * y[k * n + j];
    return out;
}

Point matvec(const std::vector<double>& m, const Point& v) {
    std::size_t n = v.size();
    Point out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i] += m[i * n + j] * v[j];
    return out;
}

} // namespace

ConformalMap ConformalMap::similarity(double ratio, std::vector<double> orthogonal, Point translation) {
    std::size_t n = translation.size();
    if (n == 0) throw ConfigurationError("similarity needs a translation of dimension >= 1");
    if (!(ratio > 0.0) || !std::isfinite(ratio)) throw ConfigurationError("similarity ratio must be positive");
    if (orthogonal.empty()) {
        orthogonal.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) orthogonal[i * n + i] = 1.0;
    }
    if (orthogonal.size() != n * n) throw ConfigurationError("orthogonal part has the wrong shape");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < n; ++k) dot += orthogonal[k * n + i] * orthogonal[k * n + j];
            if (std::abs(dot - (i == j ? 1.0 : 0.0)) > 1e-9)
                throw ConfigurationError("linear part of a similarity is not orthogonal");
        }
    return ConformalMap(Similarity{ratio, std::move(orthogonal), std::move(translation)});
}

ConformalMap ConformalMap::similarity_1d(double ratio, double translation, bool reflect) {
    return similarity(ratio, {reflect ? -1.0 : 1.0}, {translation});
}

ConformalMap ConformalMap::moebius(double a, double b, double c, double d) {
    if (a * d - b * c == 0.0) throw ConfigurationError("Moebius map has zero determinant");
    Moebius1D m{a, b, c, d};
    return ConformalMap(m);
}

ConformalMap ConformalMap::identity(int dim) {
    return similarity(1.0, {}, Point(static_cast<std::size_t>(dim), 0.0));
}

int ConformalMap::dim() const {
    if (auto s = as_similarity()) return static_cast<int>(s->translation.size());
    return 1;
}

Moebius1D ConformalMap::to_moebius() const {
    if (auto m = as_moebius()) return *m;
    const auto& s = std::get<Similarity>(rep_);
    return Moebius1D{s.ratio * s.orthogonal[0], s.translation[0], 0.0, 1.0};
}

double ConformalMap::apply(double x) const {
    if (auto s = as_similarity()) return s->ratio * s->orthogonal[0] * x + s->translation[0];
    const auto& m = std::get<Moebius1D>(rep_);
    return (m.a * x + m.b) / (m.c * x + m.d);
}

Point ConformalMap::operator()(const Point& x) const {
    if (x.size() == 1) return {apply(x[0])};
    const auto& s = std::get<Similarity>(rep_);
    Point out = matvec(s.orthogonal, x);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = s.ratio * out[i] + s.translation[i];
    return out;
}

double ConformalMap::derivative_norm(const Point& x) const {
    if (auto s = as_similarity()) return s->ratio;
    const auto& m = std::get<Moebius1D>(rep_);
    double den = m.c * x[0] + m.d;
    return std::abs(m.a * m.d - m.b * m.c) / (den * den);
}

ConformalMap ConformalMap::compose(const ConformalMap& inner) const {
    if (dim() != inner.dim()) throw ConfigurationError("composing maps of different dimension");
    auto s = as_similarity();
    auto t = inner.as_similarity();
    if (s && t) {
        std::size_t n = s->translation.size();
        Point shift = matvec(s->orthogonal, t->translation);
        for (std::size_t i = 0; i < n; ++i) shift[i] = s->ratio * shift[i] + s->translation[i];
        return ConformalMap(Similarity{s->ratio * t->ratio, matmul(s->orthogonal, t->orthogonal, n), shift});
    }
    if (dim() != 1) throw UnsupportedError("Moebius maps are only supported in dimension 1");
    Moebius1D p = to_moebius();
    Moebius1D q = inner.to_moebius();
    Moebius1D r{p.a * q.a + p.b * q.c, p.a * q.b + p.b * q.d, p.c * q.a + p.d * q.c, p.c * q.b + p.d * q.d};
    normalize(r);
    return ConformalMap(r);
}

ConformalMap ConformalMap::inverse() const {
    if (auto s = as_similarity()) {
        std::size_t n = s->translation.size();
        std::vector<double> transpose(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) transpose[i * n + j] = s->orthogonal[j * n + i];
        Point shift = matvec(transpose, s->translation);
        for (auto& v : shift) v = -v / s->ratio;
        return ConformalMap(Similarity{1.0 / s->ratio, std::move(transpose), std::move(shift)});
    }
    const auto& m = std::get<Moebius1D>(rep_);
    Moebius1D inv{m.d, -m.b, -m.c, m.a};
    normalize(inv);
    return ConformalMap(inv);
}

std::optional<double> ConformalMap::pole() const {
    if (auto m = as_moebius(); m && m->c != 0.0) return -m->d / m->c;
    return std::nullopt;
}

namespace {

void require_no_pole(const ConformalMap& f, const Ball& ball) {
    if (auto p = f.pole(); p && std::abs(*p - ball.center[0]) <= ball.radius)
        throw ConfigurationError("Moebius pole inside the domain");
}

} // namespace

Ball ConformalMap::image(const Ball& ball) const {
    if (auto s = as_similarity()) return Ball{(*this)(ball.center), s->ratio * ball.radius};
    require_no_pole(*this, ball);
    double lo = apply(ball.center[0] - ball.radius);
    double hi = apply(ball.center[0] + ball.radius);
    if (lo > hi) std::swap(lo, hi);
    return Ball{{0.5 * (lo + hi)}, 0.5 * (hi - lo)};
}

double ConformalMap::min_derivative(const Ball& ball) const {
    if (auto s = as_similarity()) return s->ratio;
    require_no_pole(*this, ball);
    // |c x + d| is affine and of constant sign on the interval, so extremes sit at endpoints.
    return std::min(derivative_norm({ball.center[0] - ball.radius}), derivative_norm({ball.center[0] + ball.radius}));
}

double ConformalMap::max_derivative(const Ball& ball) const {
    if (auto s = as_similarity()) return s->ratio;
    require_no_pole(*this, ball);
    return std::max(derivative_norm({ball.center[0] - ball.radius}), derivative_norm({ball.center[0] + ball.radius}));
}

Point evaluate(const ConformalMap& f, const Ball& domain, const Point& x) {
    if (x.size() != domain.center.size() || !domain.contains(x, 1e-12))
        throw DomainError("point outside the map domain");
    return f(x);
}

double derivative_norm(const ConformalMap& f, const Ball& domain, const Point& x) {
    if (x.size() != domain.center.size() || !domain.contains(x, 1e-12))
        throw DomainError("point outside the map domain");
    if (auto p = f.pole(); p && std::abs(*p - domain.center[0]) <= domain.radius)
        throw ConfigurationError("Moebius pole inside the domain");
    return f.derivative_norm(x);
}

} // namespace lipext
