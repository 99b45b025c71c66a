#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "slicevol/errors.hpp"
#include "slicevol/hypercube.hpp"
#include "slicevol/simplex.hpp"

namespace slicevol {

namespace detail {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Counter-based per-sample stream: a pure function of (seed, index), so
/// sampling can be partitioned across workers without changing the draw.
class SampleStream {
public:
    SampleStream(std::uint64_t seed, std::uint64_t index)
        : state_(seed ^ (0x632BE59BD9B4E019ull * (index + 1))) {
        splitmix64_next(state_); // decorrelate nearby counters
    }

    /// Uniform draw in the open interval (0, 1); never exactly 0 or 1.
    double uniform01() {
        return (static_cast<double>(splitmix64_next(state_) >> 11) + 0.5) * 0x1p-53;
    }

private:
    std::uint64_t state_;
};

} // namespace detail

/// Monte Carlo estimate with its binomial standard error.
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

/// i.i.d. uniform points on the canonical simplex via normalized
/// exponential spacings (n+1 exponentials, last coordinate dropped).
inline std::vector<std::vector<double>> sample_simplex_uniform(int n, std::int64_t count,
                                                               std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("sample_simplex_uniform: dimension must be >= 1");
    if (count < 1) throw InvalidArgument("sample_simplex_uniform: count must be >= 1");
    std::vector<std::vector<double>> points(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        detail::SampleStream stream(seed, static_cast<std::uint64_t>(i));
        std::vector<double> e(static_cast<std::size_t>(n) + 1);
        double total = 0.0;
        for (auto& ej : e) {
            ej = -std::log(stream.uniform01());
            total += ej;
        }
        std::vector<double> x(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = e[static_cast<std::size_t>(j)] / total;
        points[static_cast<std::size_t>(i)] = std::move(x);
    }
    return points;
}

struct CanonicalSimplexBody {
    int dim;
};
struct UnitCubeBody {
    int dim;
};
using Body = std::variant<CanonicalSimplexBody, UnitCubeBody, SimplexSpec>;

namespace detail {

inline int body_dim(const Body& body) {
    if (const auto* c = std::get_if<CanonicalSimplexBody>(&body)) return c->dim;
    if (const auto* q = std::get_if<UnitCubeBody>(&body)) return q->dim;
    return std::get<SimplexSpec>(body).dim();
}

inline double body_volume(const Body& body) {
    if (const auto* c = std::get_if<CanonicalSimplexBody>(&body))
        return static_cast<double>(1.0L / factorial_ld(c->dim));
    if (std::get_if<UnitCubeBody>(&body)) return 1.0;
    return std::get<SimplexSpec>(body).volume();
}

} // namespace detail

/// Hit-or-miss estimate of vol(body ∩ {a^T x <= t}). Deterministic in
/// (seed, N, body, query).
inline McEstimate mc_section_estimate(const Body& body, std::span<const double> a, double t,
                                      std::int64_t samples, std::uint64_t seed) {
    if (samples < 1000) throw InvalidArgument("mc_section_estimate: need at least 1000 samples");
    const int n = detail::body_dim(body);
    if (static_cast<int>(a.size()) != n)
        throw InvalidArgument("mc_section_estimate: direction dimension mismatch");

    const bool is_cube = std::holds_alternative<UnitCubeBody>(body);
    const SimplexSpec* spec = std::get_if<SimplexSpec>(&body);

    std::int64_t hits = 0;
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> e(static_cast<std::size_t>(n) + 1);
    for (std::int64_t i = 0; i < samples; ++i) {
        detail::SampleStream stream(seed, static_cast<std::uint64_t>(i));
        if (is_cube) {
            for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = stream.uniform01();
        } else {
            double total = 0.0;
            for (auto& ej : e) {
                ej = -std::log(stream.uniform01());
                total += ej;
            }
            for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = e[static_cast<std::size_t>(j)] / total;
            if (spec) {
                // Barycentric map onto the arbitrary simplex.
                double rest = 1.0;
                std::vector<double> mapped(static_cast<std::size_t>(n), 0.0);
                for (int j = 0; j < n; ++j) rest -= x[static_cast<std::size_t>(j)];
                for (int r = 0; r < n; ++r) {
                    long double acc = static_cast<long double>(rest) *
                                      spec->vertices()[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)];
                    for (int j = 0; j < n; ++j)
                        acc += static_cast<long double>(x[static_cast<std::size_t>(j)]) *
                               spec->vertices()[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
                    mapped[static_cast<std::size_t>(r)] = static_cast<double>(acc);
                }
                x = std::move(mapped);
            }
        }
        long double dot = 0.0L;
        for (int j = 0; j < n; ++j)
            dot += static_cast<long double>(a[static_cast<std::size_t>(j)]) * x[static_cast<std::size_t>(j)];
        if (static_cast<double>(dot) <= t) ++hits;
    }

    const double vol = detail::body_volume(body);
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    McEstimate est;
    est.mean = vol * p;
    est.std_error = vol * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    est.samples = samples;
    est.seed = seed;
    return est;
}

using Point2 = std::array<double, 2>;

inline std::vector<Point2> canonical_triangle_2d() {
    return {{{0.0, 0.0}}, {{1.0, 0.0}}, {{0.0, 1.0}}};
}

inline std::vector<Point2> unit_square_2d() {
    return {{{0.0, 0.0}}, {{1.0, 0.0}}, {{1.0, 1.0}}, {{0.0, 1.0}}};
}

namespace detail {

inline double shoelace_area(std::span<const Point2> poly) {
    long double twice = 0.0L;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % poly.size()];
        twice += static_cast<long double>(p[0]) * q[1] - static_cast<long double>(q[0]) * p[1];
    }
    return std::fabs(static_cast<double>(twice)) * 0.5;
}

inline void check_polygon_2d(std::span<const Point2> poly, std::span<const double> a) {
    if (poly.size() < 3) throw DegenerateBody("need a polygon with at least 3 vertices");
    if (shoelace_area(poly) == 0.0) throw DegenerateBody("polygon has zero area");
    if (a.size() != 2) throw InvalidArgument("2-D oracle needs a 2-D direction");
    if (a[0] == 0.0 && a[1] == 0.0) throw ZeroDirection();
}

} // namespace detail

/// Exact area of polygon ∩ {a^T x <= t} by half-plane clipping.
inline double polygon_section_oracle_2d(std::span<const Point2> poly, std::span<const double> a,
                                        double t) {
    detail::check_polygon_2d(poly, a);
    std::vector<Point2> clipped;
    const auto side = [&](const Point2& p) { return a[0] * p[0] + a[1] * p[1] - t; };
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& prev = poly[(i + poly.size() - 1) % poly.size()];
        const Point2& cur = poly[i];
        const double sp = side(prev);
        const double sc = side(cur);
        const bool prev_in = sp <= 0.0;
        const bool cur_in = sc <= 0.0;
        if (cur_in != prev_in) {
            const double w = sp / (sp - sc);
            clipped.push_back({prev[0] + w * (cur[0] - prev[0]), prev[1] + w * (cur[1] - prev[1])});
        }
        if (cur_in) clipped.push_back(cur);
    }
    if (clipped.size() < 3) return 0.0;
    return detail::shoelace_area(clipped);
}

/// Exact length of polygon ∩ {a^T x = t}: the chord of the convex body.
inline double segment_slice_oracle_2d(std::span<const Point2> poly, std::span<const double> a,
                                      double t) {
    detail::check_polygon_2d(poly, a);
    std::vector<Point2> pts;
    const auto side = [&](const Point2& p) { return a[0] * p[0] + a[1] * p[1] - t; };
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % poly.size()];
        const double sp = side(p);
        const double sq = side(q);
        if (sp == 0.0) pts.push_back(p);
        if ((sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0)) {
            const double w = sp / (sp - sq);
            pts.push_back({p[0] + w * (q[0] - p[0]), p[1] + w * (q[1] - p[1])});
        }
    }
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]));
    return best;
}

/// Central difference (f(t+h) - f(t-h)) / 2h; O(h^2) for smooth pieces.
inline double fd_derivative_oracle(const std::function<double(double)>& f, double t, double h,
                                   std::span<const double> breakpoints = {}) {
    if (!(h > 0.0)) throw InvalidArgument("fd_derivative_oracle: h must be positive");
    for (double b : breakpoints)
        if (std::fabs(t - b) <= h)
            throw TooCloseToBreakpoint("fd_derivative_oracle: t within h of a breakpoint");
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

/// Cross-module identity: the cube section volume assembled from the n!
/// order simplices {x_sigma(1) <= ... <= x_sigma(n)} that tile the cube.
inline double cube_decomposition_oracle(std::span<const double> a, double t) {
    const int n = static_cast<int>(a.size());
    if (n < 1) throw InvalidArgument("cube_decomposition_oracle: empty direction");
    if (n > 6)
        throw DimensionTooLarge("cube_decomposition_oracle: dimension " + std::to_string(n) +
                                " exceeds cap 6");
    const Direction dir(std::vector<double>(a.begin(), a.end()));

    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;

    long double total = 0.0L;
    do {
        // Vertices 0, e_{perm[n-1]}, e_{perm[n-1]}+e_{perm[n-2]}, ..., 1.
        std::vector<std::vector<double>> verts;
        verts.reserve(static_cast<std::size_t>(n) + 1);
        std::vector<double> v(static_cast<std::size_t>(n), 0.0);
        verts.push_back(v);
        for (int k = n - 1; k >= 0; --k) {
            v[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = 1.0;
            verts.push_back(v);
        }
        total += arbitrary_section_volume(SimplexSpec(std::move(verts)), dir, t);
    } while (std::next_permutation(perm.begin(), perm.end()));

    return static_cast<double>(total);
}

} // namespace slicevol
