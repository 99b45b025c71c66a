#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slicevol/curve.hpp"
#include "slicevol/errors.hpp"
#include "slicevol/eval_result.hpp"
#include "slicevol/kernel.hpp"
#include "slicevol/node_multiset.hpp"

namespace slicevol {

/// Cap on the 2^n subset enumeration for point queries; overridable per call.
inline constexpr int kCubeMaxPointDim = 25;
/// Cap for full curves (up to 2^n breakpoints).
inline constexpr int kCubeMaxCurveDim = 12;

/// Direction for hypercube queries. Every coordinate must be nonzero: the
/// closed form divides by their product, and the volume is constant in a
/// coordinate whose weight is zero (drop it instead). Negative coordinates
/// are folded away by the reflection x_i -> 1 - x_i, which turns (a, t)
/// into (|a|, t - sum of negative entries).
class CubeDirection {
public:
    explicit CubeDirection(std::vector<double> coords) : coords_(std::move(coords)) {
        if (coords_.empty()) throw InvalidArgument("CubeDirection: empty coordinate vector");
        long double sq = 0.0L;
        long double neg = 0.0L;
        reduced_.resize(coords_.size());
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            const double c = coords_[i];
            if (!std::isfinite(c)) throw InvalidArgument("CubeDirection: non-finite coordinate");
            if (c == 0.0) throw ZeroCoordinate(static_cast<int>(i));
            if (c < 0.0) {
                reflection_.push_back(static_cast<int>(i));
                neg += c;
            }
            reduced_[i] = std::fabs(c);
            sq += static_cast<long double>(c) * c;
        }
        norm_ = static_cast<double>(std::sqrt(sq));
        offset_ = static_cast<double>(neg);
    }

    int dim() const { return static_cast<int>(coords_.size()); }
    const std::vector<double>& coords() const { return coords_; }
    const std::vector<double>& reduced() const { return reduced_; }
    const std::vector<int>& reflection_mask() const { return reflection_; }
    double norm() const { return norm_; }
    /// Sum of the negative coordinates; the reflected threshold is t - offset.
    double offset() const { return offset_; }

    std::vector<double> reduced_unit() const {
        std::vector<double> u(reduced_.size());
        for (std::size_t i = 0; i < reduced_.size(); ++i) u[i] = reduced_[i] / norm_;
        return u;
    }

private:
    std::vector<double> coords_;
    std::vector<double> reduced_;
    std::vector<int> reflection_;
    double norm_ = 0.0;
    double offset_ = 0.0;
};

namespace detail {

struct SignedSubsetSum {
    long double sum = 0.0L;      // compensated signed sum of (u - S_U)_+^k
    long double abs_sum = 0.0L;  // sum of absolute term values
    bool hit_subset_sum = false; // u coincided exactly with some S_U
};

// Inclusion-exclusion over all 2^n subsets in Gray-code order, so each step
// updates the running subset sum by one coordinate. The running sum is
// recomputed from scratch every 4096 steps to stop drift; the reduction
// order is fixed, giving bit-reproducible results.
inline SignedSubsetSum cube_signed_subset_sum(std::span<const double> coords, double u,
                                              int exponent) {
    const int n = static_cast<int>(coords.size());
    SignedSubsetSum out;
    long double comp = 0.0L;
    const auto accumulate = [&](long double term) {
        const long double t = out.sum + term;
        if (std::fabs(out.sum) >= std::fabs(term))
            comp += (out.sum - t) + term;
        else
            comp += (term - t) + out.sum;
        out.sum = t;
        out.abs_sum += std::fabs(term);
    };
    const auto term_at = [&](long double s, bool odd) {
        const long double d = static_cast<long double>(u) - s;
        if (d == 0.0L) out.hit_subset_sum = true;
        long double pw;
        if (exponent == 0) {
            pw = (d >= 0.0L) ? 1.0L : 0.0L;
        } else {
            if (d <= 0.0L) return;
            pw = d;
            for (int i = 1; i < exponent; ++i) pw *= d;
        }
        accumulate(odd ? -pw : pw);
    };

    long double running = 0.0L;
    bool odd = false;
    term_at(running, odd);
    const std::uint64_t count = std::uint64_t{1} << n;
    std::uint64_t gray = 0;
    for (std::uint64_t i = 1; i < count; ++i) {
        const int bit = std::countr_zero(i);
        gray ^= (std::uint64_t{1} << bit);
        if ((gray >> bit) & 1u)
            running += static_cast<long double>(coords[static_cast<std::size_t>(bit)]);
        else
            running -= static_cast<long double>(coords[static_cast<std::size_t>(bit)]);
        odd = !odd;
        if ((i & 0xFFFu) == 0) {
            running = 0.0L;
            for (int b = 0; b < n; ++b)
                if ((gray >> b) & 1u)
                    running += static_cast<long double>(coords[static_cast<std::size_t>(b)]);
        }
        term_at(running, odd);
    }
    out.sum += comp;
    return out;
}

inline long double coord_product(std::span<const double> coords) {
    long double p = 1.0L;
    for (double c : coords) p *= static_cast<long double>(c);
    return p;
}

inline void check_cube_dim(int n, int max_dim, const char* what) {
    if (n > max_dim)
        throw DimensionTooLarge(std::string(what) + ": dimension " + std::to_string(n) +
                                " exceeds cap " + std::to_string(max_dim));
}

// k-th derivative of the section volume at raw threshold t, divided by k!.
// Derivatives are taken in raw t, so each order picks up a 1/norm factor.
inline long double cube_scaled_derivative(const CubeDirection& a,
                                          const std::vector<double>& reduced_unit, double t,
                                          int order, double* kappa) {
    const int n = a.dim();
    const double u = (t - a.offset()) / a.norm();
    const auto acc = cube_signed_subset_sum(reduced_unit, u, n - order);
    const long double denom = factorial_ld(n - order) * factorial_ld(order) *
                              coord_product(reduced_unit);
    long double norm_pow = 1.0L;
    for (int i = 0; i < order; ++i) norm_pow *= static_cast<long double>(a.norm());
    const long double value = acc.sum / denom / norm_pow;
    if (kappa) {
        const long double abs_value = acc.abs_sum / denom / norm_pow;
        if (value == 0.0L)
            *kappa = (abs_value == 0.0L) ? 1.0 : std::numeric_limits<double>::infinity();
        else
            *kappa = std::max(1.0, static_cast<double>(abs_value / std::fabs(value)));
    }
    return value;
}

} // namespace detail

/// Volume of [0,1]^n cut by a^T x <= t, by inclusion-exclusion over the
/// 2^n cube vertices.
inline EvalResult cube_section_volume_detail(const CubeDirection& a, double t,
                                             int max_dim = kCubeMaxPointDim) {
    detail::check_cube_dim(a.dim(), max_dim, "cube_section_volume");
    double kappa = 1.0;
    const std::vector<double> ru = a.reduced_unit();
    const long double raw = detail::cube_scaled_derivative(a, ru, t, 0, &kappa);
    const double value = std::min(std::max(static_cast<double>(raw), 0.0), 1.0);
    return make_result(value, kappa);
}

inline double cube_section_volume(const CubeDirection& a, double t,
                                  int max_dim = kCubeMaxPointDim) {
    return cube_section_volume_detail(a, t, max_dim).value;
}

/// (n-1)-volume of the hyperplane slice a^T x = t of the unit cube. For
/// n = 2 a threshold exactly on a subset-sum breakpoint is a kink; the
/// returned value is flagged one_sided there.
inline EvalResult cube_slice_volume_detail(const CubeDirection& a, double t,
                                           int max_dim = kCubeMaxPointDim) {
    const int n = a.dim();
    if (n < 2) throw DimensionTooSmall("cube_slice_volume: need dimension >= 2");
    detail::check_cube_dim(n, max_dim, "cube_slice_volume");

    const std::vector<double> ru = a.reduced_unit();
    const double u = (t - a.offset()) / a.norm();
    const auto acc = detail::cube_signed_subset_sum(ru, u, n - 1);
    const long double denom = detail::factorial_ld(n - 1) * detail::coord_product(ru);
    const long double raw = acc.sum / denom;
    double kappa;
    if (raw == 0.0L)
        kappa = (acc.abs_sum == 0.0L) ? 1.0 : std::numeric_limits<double>::infinity();
    else
        kappa = std::max(1.0, static_cast<double>(acc.abs_sum / std::fabs(acc.sum)));
    const bool one_sided = (n == 2) && acc.hit_subset_sum;
    return make_result(std::max(static_cast<double>(raw), 0.0), kappa, one_sided);
}

inline double cube_slice_volume(const CubeDirection& a, double t,
                                int max_dim = kCubeMaxPointDim) {
    return cube_slice_volume_detail(a, t, max_dim).value;
}

/// Volume between two parallel cuts: section(t2) - section(t1).
inline EvalResult cube_slab_volume_detail(const CubeDirection& a, double t1, double t2,
                                          int max_dim = kCubeMaxPointDim) {
    if (!(t1 <= t2)) throw InvalidInterval("cube_slab_volume: need t1 <= t2");
    const EvalResult lo = cube_section_volume_detail(a, t1, max_dim);
    const EvalResult hi = cube_section_volume_detail(a, t2, max_dim);
    const double value = std::min(std::max(hi.value - lo.value, 0.0), 1.0);
    return make_result(value, std::max(lo.kappa, hi.kappa));
}

inline double cube_slab_volume(const CubeDirection& a, double t1, double t2,
                               int max_dim = kCubeMaxPointDim) {
    return cube_slab_volume_detail(a, t1, t2, max_dim).value;
}

struct CubeCurveResult {
    PiecewisePolynomialCurve curve;
    double kappa = 1.0;
    bool low_confidence = false;
};

/// The full map t -> cube section volume; breakpoints at the distinct
/// vertex projections a^T 1_U.
inline CubeCurveResult cube_curve_detail(const CubeDirection& a,
                                         int max_dim = kCubeMaxCurveDim) {
    const int n = a.dim();
    detail::check_cube_dim(n, max_dim, "cube_curve");

    // Raw-threshold kink locations: subset sums of the signed coordinates.
    std::vector<double> sums;
    sums.reserve(std::size_t{1} << n);
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        long double s = 0.0L;
        for (int b = 0; b < n; ++b)
            if ((mask >> b) & 1u) s += static_cast<long double>(a.coords()[static_cast<std::size_t>(b)]);
        sums.push_back(static_cast<double>(s));
    }
    const NodeMultiset clustered = cluster_nodes(sums);

    PiecewisePolynomialCurve curve;
    curve.breakpoints = clustered.breakpoints;
    curve.left_value = 0.0;
    curve.right_value = 1.0;

    const std::vector<double> ru = a.reduced_unit();
    double kappa_max = 1.0;
    for (std::size_t k = 0; k + 1 < clustered.breakpoints.size(); ++k) {
        const double left = clustered.breakpoints[k];
        const double right = clustered.breakpoints[k + 1];
        const double mid = 0.5 * (left + right);

        std::vector<long double> at_mid(static_cast<std::size_t>(n) + 1);
        for (int m = 0; m <= n; ++m) {
            double kappa = 1.0;
            at_mid[static_cast<std::size_t>(m)] =
                detail::cube_scaled_derivative(a, ru, mid, m, m == 0 ? &kappa : nullptr);
            if (m == 0) kappa_max = std::max(kappa_max, kappa);
        }

        const long double delta = static_cast<long double>(left) - mid;
        std::vector<double> coeffs(static_cast<std::size_t>(n) + 1);
        for (int j = 0; j <= n; ++j) {
            long double acc = 0.0L;
            long double power = 1.0L;
            for (int m = j; m <= n; ++m) {
                acc += at_mid[static_cast<std::size_t>(m)] * detail::binomial_ld(m, j) * power;
                power *= delta;
            }
            coeffs[static_cast<std::size_t>(j)] = static_cast<double>(acc);
        }
        curve.pieces.push_back(std::move(coeffs));
    }

    return {std::move(curve), kappa_max, kappa_max > kLowConfidenceKappa};
}

inline PiecewisePolynomialCurve cube_curve(const CubeDirection& a,
                                           int max_dim = kCubeMaxCurveDim) {
    return cube_curve_detail(a, max_dim).curve;
}

} // namespace slicevol
