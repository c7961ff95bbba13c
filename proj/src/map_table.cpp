#include "lipext/map_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "lipext/errors.hpp"
#include "lipext/rational.hpp"

namespace lipext {

double RatioBounds::L_high() const {
    if (!(min_ratio > 0.0)) return std::numeric_limits<double>::infinity();
    return std::max(max_ratio, 1.0 / min_ratio);
}

namespace {

RatioBounds one_dimensional(const std::vector<Point>& sources, const std::vector<Point>& images,
                            std::vector<std::size_t> idx) {
    RatioBounds rb;
    rb.points = idx.size();
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return sources[a][0] < sources[b][0]; });
    for (std::size_t k = 1; k < idx.size(); ++k) {
        std::size_t a = idx[k - 1], b = idx[k];
        double slope = std::abs(images[b][0] - images[a][0]) / (sources[b][0] - sources[a][0]);
        if (slope > rb.max_ratio) {
            rb.max_ratio = slope;
            rb.max_pair[0] = a;
            rb.max_pair[1] = b;
        }
    }
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return images[a][0] < images[b][0]; });
    double inverse = 0.0;
    for (std::size_t k = 1; k < idx.size(); ++k) {
        std::size_t a = idx[k - 1], b = idx[k];
        double dy = images[b][0] - images[a][0];
        double dx = std::abs(sources[b][0] - sources[a][0]);
        double v = dy > 0.0 ? dx / dy : std::numeric_limits<double>::infinity();
        if (v > inverse) {
            inverse = v;
            rb.min_pair[0] = a;
            rb.min_pair[1] = b;
        }
    }
    rb.min_ratio = std::isinf(inverse) ? 0.0 : 1.0 / inverse;
    return rb;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') quoted = !quoted;
        else if (ch == ',' && !quoted) {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string quote(const std::string& s) { return s.find(',') == std::string::npos ? s : "\"" + s + "\""; }

} // namespace

RatioBounds pairwise_ratio_bounds(const std::vector<Point>& sources, const std::vector<Point>& images) {
    if (sources.size() != images.size()) throw ConfigurationError("table columns have different lengths");
    // Keep the first occurrence of each source.
    std::vector<std::size_t> idx(sources.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return sources[a] < sources[b]; });
    idx.erase(std::unique(idx.begin(), idx.end(), [&](auto a, auto b) { return sources[a] == sources[b]; }),
              idx.end());
    if (idx.size() < 2) throw DegenerateError("fewer than two distinct points");

    if (sources[idx[0]].size() == 1 && images[idx[0]].size() == 1) return one_dimensional(sources, images, idx);

    RatioBounds rb;
    rb.points = idx.size();
    rb.min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < idx.size(); ++p) {
        for (std::size_t q = p + 1; q < idx.size(); ++q) {
            std::size_t a = idx[p], b = idx[q];
            double ratio = distance(images[a], images[b]) / distance(sources[a], sources[b]);
            if (ratio < rb.min_ratio) {
                rb.min_ratio = ratio;
                rb.min_pair[0] = a;
                rb.min_pair[1] = b;
            }
            if (ratio > rb.max_ratio) {
                rb.max_ratio = ratio;
                rb.max_pair[0] = a;
                rb.max_pair[1] = b;
            }
        }
    }
    return rb;
}

void write_table_csv(std::ostream& os, const MapTable& t) {
    std::size_t n = t.sources.empty() ? 1 : t.sources.front().size();
    std::size_t p = t.images.empty() ? 1 : t.images.front().size();
    for (std::size_t k = 0; k < n; ++k) os << 'x' << k + 1 << ',';
    for (std::size_t k = 0; k < p; ++k) os << 'y' << k + 1 << ',';
    os << "provenance\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (double v : t.sources[i]) os << format_double(v) << ',';
        for (double v : t.images[i]) os << format_double(v) << ',';
        os << quote(i < t.provenance.size() ? t.provenance[i] : std::string{}) << '\n';
    }
}

void write_table_csv(const std::string& path, const MapTable& table) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InputError("cannot write " + path);
    write_table_csv(os, table);
}

MapTable read_table_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InputError("cannot read " + path);
    std::string line;
    if (!std::getline(is, line)) throw InputError(path + ": empty table");
    auto header = split_csv_line(line);
    std::size_t n = 0, p = 0;
    bool has_prov = false;
    for (const auto& h : header) {
        if (!h.empty() && h[0] == 'x') ++n;
        else if (!h.empty() && h[0] == 'y') ++p;
        else if (h == "provenance") has_prov = true;
        else throw InputError(path + ": unknown column '" + h + "'");
    }
    if (n == 0 || p == 0) throw InputError(path + ": table needs x and y columns");
    MapTable t;
    t.label = path;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (cells.size() != n + p + (has_prov ? 1 : 0))
            throw InputError(path + ": row " + std::to_string(row) + " has the wrong number of columns");
        Point x(n), y(p);
        for (std::size_t k = 0; k < n; ++k) x[k] = parse_rational(cells[k]);
        for (std::size_t k = 0; k < p; ++k) y[k] = parse_rational(cells[n + k]);
        t.sources.push_back(std::move(x));
        t.images.push_back(std::move(y));
        t.provenance.push_back(has_prov ? cells.back() : std::string{});
    }
    return t;
}

void write_points_csv(const std::string& path, const std::vector<Point>& points,
                      const std::vector<std::string>& provenance) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InputError("cannot write " + path);
    std::size_t n = points.empty() ? 1 : points.front().size();
    for (std::size_t k = 0; k < n; ++k) os << (k ? "," : "") << 'x' << k + 1;
    if (!provenance.empty()) os << ",provenance";
    os << '\n';
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t k = 0; k < points[i].size(); ++k) os << (k ? "," : "") << format_double(points[i][k]);
        if (!provenance.empty()) os << ',' << quote(provenance[i]);
        os << '\n';
    }
}

std::vector<Point> read_points_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InputError("cannot read " + path);
    std::string line;
    if (!std::getline(is, line)) throw InputError(path + ": empty point list");
    auto header = split_csv_line(line);
    std::size_t n = 0;
    while (n < header.size() && !header[n].empty() && header[n][0] == 'x') ++n;
    if (n == 0) throw InputError(path + ": point list needs x columns");
    std::vector<Point> out;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (cells.size() < n) throw InputError(path + ": short row");
        Point x(n);
        for (std::size_t k = 0; k < n; ++k) x[k] = parse_rational(cells[k]);
        out.push_back(std::move(x));
    }
    return out;
}

VerifyReport verify_map_table(const MapTable& table, const std::vector<Point>* target_net, double eps,
                              VerifyMode mode) {
    VerifyReport rep;
    rep.mode = mode;
    RatioBounds rb;
    try {
        rb = table.ratios();
    } catch (const DegenerateError& e) {
        rep.witness = e.what();
        return rep;
    }
    rep.L_low = rb.L_low();
    rep.L_high = rb.L_high();
    bool into = std::isfinite(rep.L_high);
    if (!into) {
        rep.witness = "sources " + std::to_string(rb.min_pair[0]) + " and " + std::to_string(rb.min_pair[1]) +
                      " share an image";
    } else if (table.claimed_bound && rep.L_high > *table.claimed_bound * (1.0 + 1e-9)) {
        into = false;
        rep.witness = "pair " + std::to_string(rb.max_pair[0]) + "," + std::to_string(rb.max_pair[1]) +
                      " exceeds the claimed bound";
    }
    bool onto = true;
    if (mode == VerifyMode::Onto) {
        if (!target_net || target_net->empty()) throw ConfigurationError("onto verification needs a target net");
        bool line = table.images.front().size() == 1 && target_net->front().size() == 1;
        std::vector<double> sorted;
        if (line) {
            for (const auto& y : table.images) sorted.push_back(y[0]);
            std::sort(sorted.begin(), sorted.end());
        }
        for (std::size_t i = 0; i < target_net->size(); ++i) {
            const Point& t = (*target_net)[i];
            double best = std::numeric_limits<double>::infinity();
            if (line) {
                auto it = std::lower_bound(sorted.begin(), sorted.end(), t[0]);
                if (it != sorted.end()) best = std::min(best, *it - t[0]);
                if (it != sorted.begin()) best = std::min(best, t[0] - *(it - 1));
            } else {
                for (const auto& y : table.images) best = std::min(best, distance(y, t));
            }
            if (best > rep.max_target_gap) {
                rep.max_target_gap = best;
                if (best > eps && onto) {
                    onto = false;
                    std::ostringstream os;
                    os << "target point " << i << " (";
                    for (std::size_t k = 0; k < t.size(); ++k) os << (k ? "," : "") << format_double(t[k]);
                    os << ") is " << format_double(best) << " from every image";
                    if (into) rep.witness = os.str();
                }
            }
        }
    }
    rep.passed = into && onto;
    return rep;
}

std::string format_verdict(const VerifyReport& rep) {
    std::ostringstream os;
    os << "mode = " << (rep.mode == VerifyMode::Into ? "into" : "onto") << '\n';
    os << "verdict = " << (rep.passed ? "pass" : "fail") << '\n';
    os << "L_low = " << format_double(rep.L_low) << '\n';
    os << "L_high = " << format_double(rep.L_high) << '\n';
    if (rep.mode == VerifyMode::Onto) os << "max_target_gap = " << format_double(rep.max_target_gap) << '\n';
    if (!rep.witness.empty()) os << "witness = " << rep.witness << '\n';
    return os.str();
}

} // namespace lipext
