#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "slicevol/errors.hpp"

namespace slicevol {

/// t -> volume as a piecewise polynomial. Pieces live on the half-open
/// intervals [breakpoints[k], breakpoints[k+1]) and store coefficients
/// lowest-degree-first in the local variable u = t - breakpoints[k].
/// Below the first breakpoint the curve is left_value, from the last
/// breakpoint on it is right_value.
struct PiecewisePolynomialCurve {
    std::vector<double> breakpoints;
    std::vector<std::vector<double>> pieces;
    double left_value = 0.0;
    double right_value = 0.0;

    double evaluate(double t) const {
        if (t < breakpoints.front()) return left_value;
        if (t >= breakpoints.back()) return right_value;
        const std::size_t k = piece_index(t);
        return eval_poly(pieces[k], t - breakpoints[k]);
    }

    /// Derivative of the piecewise polynomial at t (the piece's polynomial
    /// derivative; constant regions differentiate to zero).
    double evaluate_derivative(double t, int order = 1) const {
        if (t < breakpoints.front() || t >= breakpoints.back()) return 0.0;
        const std::size_t k = piece_index(t);
        std::vector<double> c = pieces[k];
        for (int d = 0; d < order; ++d) c = differentiate(c);
        return eval_poly(c, t - breakpoints[k]);
    }

    static double eval_poly(const std::vector<double>& coeffs, double u) {
        double acc = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * u + coeffs[i];
        return acc;
    }

    static std::vector<double> differentiate(const std::vector<double>& coeffs) {
        if (coeffs.size() <= 1) return {0.0};
        std::vector<double> d(coeffs.size() - 1);
        for (std::size_t i = 1; i < coeffs.size(); ++i)
            d[i - 1] = coeffs[i] * static_cast<double>(i);
        return d;
    }

private:
    std::size_t piece_index(double t) const {
        const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
        return static_cast<std::size_t>(it - breakpoints.begin()) - 1;
    }
};

} // namespace slicevol
