#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "slicevol/curve.hpp"
#include "slicevol/divided_difference.hpp"
#include "slicevol/errors.hpp"
#include "slicevol/eval_result.hpp"
#include "slicevol/kernel.hpp"
#include "slicevol/node_multiset.hpp"

namespace slicevol {

/// Query direction a in R^n with its Euclidean norm. The zero vector is
/// rejected; everything downstream works on the unit rescaling a/|a| with
/// thresholds t/|a|, which leaves sections unchanged and gives slices their
/// intrinsic (n-1)-dimensional measure.
class Direction {
public:
    explicit Direction(std::vector<double> coords) : coords_(std::move(coords)) {
        if (coords_.empty()) throw InvalidArgument("Direction: empty coordinate vector");
        long double sq = 0.0L;
        for (double c : coords_) {
            if (!std::isfinite(c)) throw InvalidArgument("Direction: non-finite coordinate");
            sq += static_cast<long double>(c) * c;
        }
        norm_ = static_cast<double>(std::sqrt(sq));
        if (norm_ == 0.0) throw ZeroDirection();
    }

    int dim() const { return static_cast<int>(coords_.size()); }
    const std::vector<double>& coords() const { return coords_; }
    double norm() const { return norm_; }

    std::vector<double> unit() const {
        std::vector<double> u(coords_.size());
        for (std::size_t i = 0; i < coords_.size(); ++i) u[i] = coords_[i] / norm_;
        return u;
    }

private:
    std::vector<double> coords_;
    double norm_;
};

/// Arbitrary n-simplex given by its n+1 vertices. Construction computes the
/// volume |det E| / n! from the edge matrix E and rejects affinely dependent
/// vertex sets (|det| <= 1e-12 * edge_scale^n).
class SimplexSpec {
public:
    explicit SimplexSpec(std::vector<std::vector<double>> vertices)
        : vertices_(std::move(vertices)) {
        if (vertices_.size() < 2)
            throw DegenerateSimplex("SimplexSpec: need at least 2 vertices");
        const std::size_t n = vertices_.size() - 1;
        for (const auto& v : vertices_) {
            if (v.size() != n)
                throw DegenerateSimplex("SimplexSpec: expected n+1 vertices of dimension n");
            for (double c : v)
                if (!std::isfinite(c)) throw InvalidArgument("SimplexSpec: non-finite vertex");
        }

        // Edge matrix relative to the last vertex, column-major.
        std::vector<long double> m(n * n);
        double edge_scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            long double sq = 0.0L;
            for (std::size_t r = 0; r < n; ++r) {
                const long double e = static_cast<long double>(vertices_[i][r]) - vertices_[n][r];
                m[i * n + r] = e;
                sq += e * e;
            }
            edge_scale = std::max(edge_scale, static_cast<double>(std::sqrt(sq)));
        }

        const long double det = determinant(m, n);
        long double threshold = 1e-12L;
        for (std::size_t i = 0; i < n; ++i) threshold *= edge_scale;
        if (!(std::fabs(det) > threshold))
            throw DegenerateSimplex("SimplexSpec: vertices are affinely dependent");
        volume_ = static_cast<double>(std::fabs(det) / detail::factorial_ld(static_cast<int>(n)));
    }

    int dim() const { return static_cast<int>(vertices_.size()) - 1; }
    const std::vector<std::vector<double>>& vertices() const { return vertices_; }
    double volume() const { return volume_; }

private:
    // Gaussian elimination with partial pivoting; m is column-major n x n.
    static long double determinant(std::vector<long double> m, std::size_t n) {
        long double det = 1.0L;
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t pivot = c;
            for (std::size_t r = c + 1; r < n; ++r)
                if (std::fabs(m[c * n + r]) > std::fabs(m[c * n + pivot])) pivot = r;
            if (m[c * n + pivot] == 0.0L) return 0.0L;
            if (pivot != c) {
                for (std::size_t cc = c; cc < n; ++cc)
                    std::swap(m[cc * n + pivot], m[cc * n + c]);
                det = -det;
            }
            const long double diag = m[c * n + c];
            det *= diag;
            for (std::size_t r = c + 1; r < n; ++r) {
                const long double factor = m[c * n + r] / diag;
                if (factor == 0.0L) continue;
                for (std::size_t cc = c + 1; cc < n; ++cc)
                    m[cc * n + r] -= factor * m[cc * n + c];
            }
        }
        return det;
    }

    std::vector<std::vector<double>> vertices_;
    double volume_ = 0.0;
};

namespace detail {

inline NodeMultiset canonical_nodes(const Direction& a) {
    std::vector<double> values;
    values.reserve(a.coords().size() + 1);
    values.push_back(0.0);
    for (double u : a.unit()) values.push_back(u);
    return cluster_nodes(values);
}

inline long double sign_for_dim(int n) { return (n & 1) ? -1.0L : 1.0L; }

inline double clamp_to(double v, double lo, double hi) {
    return std::min(std::max(v, lo), hi);
}

// True when the threshold coincides with a breakpoint whose multiplicity
// forces the jump-order derivative of the truncated power.
inline bool hits_top_confluence(const NodeMultiset& nodes, double t, int kernel_degree) {
    for (std::size_t i = 0; i < nodes.distinct(); ++i)
        if (nodes.breakpoints[i] == t && nodes.multiplicities[i] == kernel_degree + 1)
            return true;
    return false;
}

} // namespace detail

/// n-volume of the canonical simplex cut by the half-space a^T x <= t,
/// with the cancellation diagnostic attached.
inline EvalResult section_volume_detail(const Direction& a, double t) {
    const int n = a.dim();
    const double that = t / a.norm();
    const NodeMultiset nodes = detail::canonical_nodes(a);
    const auto dd = detail::dd_table(nodes, Kernel::trunc_power(that, n), Confluence::Strict);
    const long double raw = detail::sign_for_dim(n) * dd.value / detail::factorial_ld(n);
    const double full = static_cast<double>(1.0L / detail::factorial_ld(n));
    return make_result(detail::clamp_to(static_cast<double>(raw), 0.0, full), dd.kappa);
}

/// vol(simplex ∩ {a^T x <= t}); in [0, 1/n!], nondecreasing in t.
inline double section_volume(const Direction& a, double t) {
    return section_volume_detail(a, t).value;
}

/// (n-1)-volume of the hyperplane slice a^T x = t of the canonical simplex.
/// At a threshold equal to a maximal-multiplicity node the value is the
/// one-sided continuity limit (the measure of the closed facet).
inline EvalResult slice_volume_detail(const Direction& a, double t) {
    const int n = a.dim();
    if (n < 2) throw DimensionTooSmall("slice_volume: need dimension >= 2");
    const double that = t / a.norm();
    const NodeMultiset nodes = detail::canonical_nodes(a);
    const auto dd = detail::dd_table(nodes, Kernel::trunc_power(that, n - 1),
                                     Confluence::OneSidedAtThreshold);
    const long double raw = detail::sign_for_dim(n) * dd.value / detail::factorial_ld(n - 1);
    const bool one_sided = detail::hits_top_confluence(nodes, that, n - 1);
    return make_result(std::max(static_cast<double>(raw), 0.0), dd.kappa, one_sided);
}

inline double slice_volume(const Direction& a, double t) {
    return slice_volume_detail(a, t).value;
}

/// Integral of exp(-c^T x) over the canonical simplex; repeated entries of
/// c are handled confluently. Always positive.
inline EvalResult simplex_exp_integral_detail(std::span<const double> c) {
    if (c.empty()) throw InvalidArgument("simplex_exp_integral: empty coefficient vector");
    const int n = static_cast<int>(c.size());
    std::vector<double> values;
    values.reserve(c.size() + 1);
    values.push_back(0.0);
    for (double ci : c) {
        if (!std::isfinite(ci)) throw InvalidArgument("simplex_exp_integral: non-finite entry");
        values.push_back(ci);
    }
    const NodeMultiset nodes = cluster_nodes(values);
    const auto dd = detail::dd_table(nodes, Kernel::neg_exp(), Confluence::Strict);
    return make_result(static_cast<double>(detail::sign_for_dim(n) * dd.value), dd.kappa);
}

inline double simplex_exp_integral(std::span<const double> c) {
    return simplex_exp_integral_detail(c).value;
}

struct CurveResult {
    PiecewisePolynomialCurve curve;
    double kappa = 1.0;
    bool low_confidence = false;
};

namespace detail {

// Local coefficients of the degree-<=n polynomial piece on [left, right].
// The m-th Taylor coefficient at the midpoint is a divided difference of a
// lower-degree truncated power; the expansion is then shifted to the left
// edge. dd_scale multiplies every divided difference (body volume factors),
// sign is (-1)^n for n+1 nodes.
inline std::vector<double> piece_coefficients(const NodeMultiset& nodes, int n,
                                              long double dd_scale, double left, double right,
                                              double* kappa_max) {
    const double mid = 0.5 * (left + right);
    std::vector<long double> at_mid(static_cast<std::size_t>(n) + 1);
    for (int m = 0; m <= n; ++m) {
        const auto dd = dd_table(nodes, Kernel::trunc_power(mid, n - m), Confluence::Strict);
        at_mid[static_cast<std::size_t>(m)] = sign_for_dim(n) * dd_scale *
                                              binomial_ld(n, m) / factorial_ld(n) * dd.value;
        if (m == 0 && kappa_max) *kappa_max = std::max(*kappa_max, dd.kappa);
    }
    // Taylor shift from the midpoint to the left edge: p(u + delta).
    const long double delta = static_cast<long double>(left) - mid;
    std::vector<double> coeffs(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        long double acc = 0.0L;
        long double power = 1.0L;
        for (int m = j; m <= n; ++m) {
            acc += at_mid[static_cast<std::size_t>(m)] * binomial_ld(m, j) * power;
            power *= delta;
        }
        coeffs[static_cast<std::size_t>(j)] = static_cast<double>(acc);
    }
    return coeffs;
}

} // namespace detail

/// The full map t -> section volume as a piecewise polynomial of degree n
/// with breakpoints at the distinct normalized nodes.
inline CurveResult volume_curve_detail(const Direction& a) {
    const int n = a.dim();
    const NodeMultiset nodes = detail::canonical_nodes(a);

    PiecewisePolynomialCurve curve;
    curve.breakpoints = nodes.breakpoints;
    curve.left_value = 0.0;
    curve.right_value = static_cast<double>(1.0L / detail::factorial_ld(n));

    double kappa = 1.0;
    for (std::size_t k = 0; k + 1 < nodes.distinct(); ++k)
        curve.pieces.push_back(detail::piece_coefficients(
            nodes, n, 1.0L, nodes.breakpoints[k], nodes.breakpoints[k + 1], &kappa));

    return {std::move(curve), kappa, kappa > kLowConfidenceKappa};
}

inline PiecewisePolynomialCurve volume_curve(const Direction& a) {
    return volume_curve_detail(a).curve;
}

namespace detail {

inline NodeMultiset simplex_projection_nodes(const SimplexSpec& s, const Direction& a) {
    const std::vector<double> unit = a.unit();
    std::vector<double> values;
    values.reserve(s.vertices().size());
    for (const auto& v : s.vertices()) {
        long double dot = 0.0L;
        for (std::size_t i = 0; i < unit.size(); ++i)
            dot += static_cast<long double>(unit[i]) * v[i];
        values.push_back(static_cast<double>(dot));
    }
    return cluster_nodes(values);
}

inline void check_same_dim(const SimplexSpec& s, const Direction& a) {
    if (s.dim() != a.dim())
        throw InvalidArgument("simplex and direction dimensions differ");
}

} // namespace detail

/// n-volume of an arbitrary simplex cut by a^T x <= t. Affine reduction to
/// the canonical case: the nodes are the vertex projections a^T v / |a|.
inline EvalResult arbitrary_section_volume_detail(const SimplexSpec& s, const Direction& a,
                                                  double t) {
    detail::check_same_dim(s, a);
    const int n = s.dim();
    const double that = t / a.norm();
    const NodeMultiset nodes = detail::simplex_projection_nodes(s, a);
    const auto dd = detail::dd_table(nodes, Kernel::trunc_power(that, n), Confluence::Strict);
    const long double raw =
        detail::sign_for_dim(n) * static_cast<long double>(s.volume()) * dd.value;
    return make_result(detail::clamp_to(static_cast<double>(raw), 0.0, s.volume()), dd.kappa);
}

inline double arbitrary_section_volume(const SimplexSpec& s, const Direction& a, double t) {
    return arbitrary_section_volume_detail(s, a, t).value;
}

/// (n-1)-volume of the slice a^T x = t of an arbitrary simplex.
inline EvalResult arbitrary_slice_volume_detail(const SimplexSpec& s, const Direction& a,
                                                double t) {
    detail::check_same_dim(s, a);
    const int n = s.dim();
    if (n < 2) throw DimensionTooSmall("arbitrary_slice_volume: need dimension >= 2");
    const double that = t / a.norm();
    const NodeMultiset nodes = detail::simplex_projection_nodes(s, a);
    const auto dd = detail::dd_table(nodes, Kernel::trunc_power(that, n - 1),
                                     Confluence::OneSidedAtThreshold);
    const long double raw = detail::sign_for_dim(n) * static_cast<long double>(s.volume()) *
                            static_cast<long double>(n) * dd.value;
    const bool one_sided = detail::hits_top_confluence(nodes, that, n - 1);
    return make_result(std::max(static_cast<double>(raw), 0.0), dd.kappa, one_sided);
}

inline double arbitrary_slice_volume(const SimplexSpec& s, const Direction& a, double t) {
    return arbitrary_slice_volume_detail(s, a, t).value;
}

} // namespace slicevol
