#pragma once

#include <cmath>
#include <string>

#include "slicevol/errors.hpp"

namespace slicevol {

namespace detail {

inline long double binomial_ld(int n, int k) {
    if (k < 0 || k > n) return 0.0L;
    k = std::min(k, n - k);
    long double r = 1.0L;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    return r;
}

inline long double factorial_ld(int n) {
    long double r = 1.0L;
    for (int i = 2; i <= n; ++i) r *= static_cast<long double>(i);
    return r;
}

} // namespace detail

/// Evaluation kernel for divided differences. Three kinds:
///   NegExp          h(x) = exp(-x)
///   TruncPower(t,p) h(x) = (t - x)_+^p
///   Monomial(q)     h(x) = x^q            (test-only)
///
/// The truncated power's p-th derivative jumps at x = t; its value there is
/// taken as 0, the one-sided limit from x > t. Orders above p do not exist
/// at x = t and raise DerivativeUnavailable.
class Kernel {
public:
    enum class Kind { NegExp, TruncPower, Monomial };

    static Kernel neg_exp() { return Kernel(Kind::NegExp, 0.0, 0); }

    static Kernel trunc_power(double threshold, int degree) {
        if (degree < 0) throw InvalidArgument("TruncPower degree must be >= 0");
        if (!std::isfinite(threshold)) throw InvalidArgument("TruncPower threshold must be finite");
        return Kernel(Kind::TruncPower, threshold, degree);
    }

    static Kernel monomial(int degree) {
        if (degree < 0) throw InvalidArgument("Monomial degree must be >= 0");
        return Kernel(Kind::Monomial, 0.0, degree);
    }

    Kind kind() const { return kind_; }
    double threshold() const { return threshold_; }
    int degree() const { return degree_; }

    /// h^{(m)}(x) / m!, evaluated in extended precision. This is the entry a
    /// confluent Newton table stores for a node of multiplicity > m.
    long double scaled_derivative(double x, int m) const {
        const long double sign = (m & 1) ? -1.0L : 1.0L;
        switch (kind_) {
        case Kind::NegExp:
            return sign * std::exp(static_cast<long double>(-x)) / detail::factorial_ld(m);
        case Kind::TruncPower: {
            if (m > degree_) {
                if (x == threshold_)
                    throw DerivativeUnavailable(
                        "TruncPower: derivative order " + std::to_string(m) +
                        " does not exist at the threshold (degree " + std::to_string(degree_) + ")");
                return 0.0L;
            }
            if (x >= threshold_) return 0.0L; // includes the m = p one-sided convention at x = t
            const long double d = static_cast<long double>(threshold_) - static_cast<long double>(x);
            long double pw = 1.0L;
            for (int i = 0; i < degree_ - m; ++i) pw *= d;
            return sign * detail::binomial_ld(degree_, m) * pw;
        }
        case Kind::Monomial: {
            if (m > degree_) return 0.0L;
            const long double xl = static_cast<long double>(x);
            long double pw = 1.0L;
            for (int i = 0; i < degree_ - m; ++i) pw *= xl;
            return detail::binomial_ld(degree_, m) * pw;
        }
        }
        return 0.0L;
    }

    double value(double x) const { return static_cast<double>(scaled_derivative(x, 0)); }

    /// m-th derivative h^{(m)}(x).
    double derivative(double x, int m) const {
        return static_cast<double>(scaled_derivative(x, m) * detail::factorial_ld(m));
    }

private:
    Kernel(Kind kind, double threshold, int degree)
        : kind_(kind), threshold_(threshold), degree_(degree) {}

    Kind kind_;
    double threshold_;
    int degree_;
};

} // namespace slicevol
