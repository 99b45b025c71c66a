#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "slicevol/errors.hpp"
#include "slicevol/kernel.hpp"
#include "slicevol/node_multiset.hpp"

namespace slicevol {

/// How to treat a truncated-power kernel whose threshold lands exactly on a
/// breakpoint that needs the jump-order derivative. Strict raises
/// DerivativeUnavailable; OneSidedAtThreshold substitutes the limit from
/// above (derivative value 0), which is how slice values at a top facet are
/// recovered by continuity.
enum class Confluence { Strict, OneSidedAtThreshold };

namespace detail {

inline void check_trunc_power_nodes(const NodeMultiset& nodes, const Kernel& kernel,
                                    Confluence policy) {
    if (kernel.kind() != Kernel::Kind::TruncPower) return;
    const int p = kernel.degree();
    const double t = kernel.threshold();
    for (std::size_t i = 0; i < nodes.distinct(); ++i) {
        if (nodes.breakpoints[i] != t) continue;
        const int top_order = nodes.multiplicities[i] - 1;
        const int limit = (policy == Confluence::Strict) ? p - 1 : p;
        if (top_order > limit)
            throw DerivativeUnavailable(
                "confluent_dd: threshold " + std::to_string(t) +
                " coincides with a breakpoint of multiplicity " +
                std::to_string(nodes.multiplicities[i]) + " (kernel degree " +
                std::to_string(p) + ")");
    }
}

struct DdResult {
    long double value;
    double kappa;
};

/// Confluent Newton table over the expanded node sequence. A breakpoint of
/// multiplicity mu contributes h^{(m)}(z)/m! for m = 0..mu-1; distinct-ended
/// spans use the usual difference quotient. The second table propagates
/// absolute values through the same recurrence; for sorted nodes its top
/// entry equals the sum of absolute term magnitudes of the explicit
/// distinct-node sum, which makes kappa the cancellation index.
inline DdResult dd_table(const NodeMultiset& nodes, const Kernel& kernel, Confluence policy) {
    check_trunc_power_nodes(nodes, kernel, policy);

    std::vector<double> z;
    std::vector<int> id;
    z.reserve(static_cast<std::size_t>(nodes.total()));
    id.reserve(z.capacity());
    for (std::size_t i = 0; i < nodes.distinct(); ++i)
        for (int m = 0; m < nodes.multiplicities[i]; ++m) {
            z.push_back(nodes.breakpoints[i]);
            id.push_back(static_cast<int>(i));
        }

    const std::size_t count = z.size();
    std::vector<long double> col(count), mag(count);
    for (std::size_t i = 0; i < count; ++i) {
        col[i] = kernel.scaled_derivative(z[i], 0);
        mag[i] = std::fabs(col[i]);
    }
    for (std::size_t k = 1; k < count; ++k) {
        for (std::size_t i = 0; i + k < count; ++i) {
            if (id[i + k] == id[i]) {
                col[i] = kernel.scaled_derivative(z[i], static_cast<int>(k));
                mag[i] = std::fabs(col[i]);
            } else {
                const long double gap = static_cast<long double>(z[i + k]) - z[i];
                col[i] = (col[i + 1] - col[i]) / gap;
                mag[i] = (mag[i + 1] + mag[i]) / gap;
            }
        }
    }

    double kappa;
    const long double value = col[0];
    if (value == 0.0L)
        kappa = (mag[0] == 0.0L) ? 1.0 : std::numeric_limits<double>::infinity();
    else
        kappa = std::max(1.0, static_cast<double>(mag[0] / std::fabs(value)));
    return {value, kappa};
}

} // namespace detail

/// Divided difference of `kernel` over the node multiset. For all-distinct
/// nodes this equals sum_i h(z_i) / prod_{j != i} (z_i - z_j); repeated
/// breakpoints are the confluent (derivative-based) limit of that sum.
inline double confluent_dd(const NodeMultiset& nodes, const Kernel& kernel,
                           Confluence policy = Confluence::Strict) {
    return static_cast<double>(detail::dd_table(nodes, kernel, policy).value);
}

/// Ratio of the sum of absolute term magnitudes to the absolute result.
/// Always >= 1; +infinity when the result is exactly zero but some term is
/// not. Large values flag catastrophic cancellation.
inline double cancellation_index(const NodeMultiset& nodes, const Kernel& kernel,
                                 Confluence policy = Confluence::Strict) {
    return detail::dd_table(nodes, kernel, policy).kappa;
}

} // namespace slicevol
