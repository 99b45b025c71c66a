#pragma once

// Independent reference implementations used only by tests. Nothing here
// goes through the Newton-table engine: the explicit sums and quadratures
// below are the oracles the closed forms are checked against.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace testref {

inline long double factorial(int n) {
    long double r = 1.0L;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline long double trunc_pow(long double x, int p) {
    if (p == 0) return x >= 0.0L ? 1.0L : 0.0L;
    if (x <= 0.0L) return 0.0L;
    long double r = 1.0L;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

/// Explicit distinct-node divided difference: sum h(z_i) / prod_{j!=i}(z_i - z_j).
inline long double explicit_distinct_dd(std::span<const double> nodes,
                                        const std::function<long double(long double)>& h) {
    long double sum = 0.0L;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        long double prod = 1.0L;
        for (std::size_t j = 0; j < nodes.size(); ++j)
            if (j != i) prod *= static_cast<long double>(nodes[i]) - nodes[j];
        sum += h(nodes[i]) / prod;
    }
    return sum;
}

/// Sum of the absolute magnitudes of the explicit sum's terms.
inline long double explicit_distinct_dd_abs(std::span<const double> nodes,
                                            const std::function<long double(long double)>& h) {
    long double sum = 0.0L;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        long double prod = 1.0L;
        for (std::size_t j = 0; j < nodes.size(); ++j)
            if (j != i) prod *= static_cast<long double>(nodes[i]) - nodes[j];
        sum += std::fabs(h(nodes[i]) / prod);
    }
    return sum;
}

/// Section volume from the explicit distinct-node truncated-power sum,
/// vol = (1/n!) sum (t - z_i)_+^n / prod_{j!=i}(z_j - z_i).
inline double section_from_distinct_sum(std::span<const double> nodes, double t, int n) {
    long double sum = 0.0L;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        long double prod = 1.0L;
        for (std::size_t j = 0; j < nodes.size(); ++j)
            if (j != i) prod *= static_cast<long double>(nodes[j]) - nodes[i];
        sum += trunc_pow(static_cast<long double>(t) - nodes[i], n) / prod;
    }
    return static_cast<double>(sum / factorial(n));
}

/// Corrected epsilon->0 limit of the distinct formula when exactly one node
/// value s is repeated twice (the degenerate-weights closed form): the
/// regular group keeps the (a_j - a_i) orientation with the repeated factor
/// squared, and merging the pair contributes the s-derivative of
/// (t-s)_+^n / prod_{j}(a_j - s), i.e. two explicit terms.
inline double degenerate_pair_section(std::span<const double> distinct, std::size_t repeated,
                                      int n, double t) {
    const long double s = distinct[repeated];
    long double regular = 0.0L;
    for (std::size_t i = 0; i < distinct.size(); ++i) {
        if (i == repeated) continue;
        long double prod = 1.0L;
        for (std::size_t j = 0; j < distinct.size(); ++j) {
            if (j == i) continue;
            const long double f = static_cast<long double>(distinct[j]) - distinct[i];
            prod *= (j == repeated) ? f * f : f;
        }
        regular += trunc_pow(static_cast<long double>(t) - distinct[i], n) / prod;
    }
    long double prod_s = 1.0L;
    long double inv_sum = 0.0L;
    for (std::size_t j = 0; j < distinct.size(); ++j) {
        if (j == repeated) continue;
        const long double f = static_cast<long double>(distinct[j]) - s;
        prod_s *= f;
        inv_sum += 1.0L / f;
    }
    const long double d = static_cast<long double>(t) - s;
    const long double merged =
        trunc_pow(d, n - 1) / factorial(n - 1) / prod_s - trunc_pow(d, n) * inv_sum / prod_s / factorial(n);
    return static_cast<double>(regular / factorial(n) + merged);
}

/// Plain adaptive Simpson quadrature.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int max_depth = 40) {
    struct Impl {
        const std::function<double(double)>& f;
        int max_depth;
        double recurse(double a, double fa, double b, double fb, double m, double fm,
                       double whole, double tol, int depth) const {
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth >= max_depth || std::fabs(delta) <= 15.0 * tol)
                return left + right + delta / 15.0;
            return recurse(a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) +
                   recurse(m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1);
        }
    };
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return Impl{f, max_depth}.recurse(a, fa, b, fb, m, fm, whole, tol, 0);
}

/// Quadrature that subdivides at the given breakpoints first.
inline double piecewise_quadrature(const std::function<double(double)>& f,
                                   std::span<const double> breakpoints, double a, double b,
                                   double tol) {
    std::vector<double> cuts{a};
    for (double c : breakpoints)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += adaptive_simpson(f, cuts[i], cuts[i + 1], tol);
    return total;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, int n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = dist(rng);
    return v;
}

/// Random direction on the unit sphere (optionally restricted to the
/// positive orthant), with coordinates bounded away from zero so the test
/// cases stay well conditioned.
inline std::vector<double> random_unit(std::mt19937_64& rng, int n, bool nonneg = false,
                                       double min_abs = 0.0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(n));
    while (true) {
        double sq = 0.0;
        bool ok = true;
        for (auto& x : v) {
            x = gauss(rng);
            if (nonneg) x = std::fabs(x);
            sq += x * x;
        }
        const double norm = std::sqrt(sq);
        if (norm == 0.0) continue;
        for (auto& x : v) {
            x /= norm;
            if (std::fabs(x) < min_abs) ok = false;
        }
        if (ok) return v;
    }
}

} // namespace testref
