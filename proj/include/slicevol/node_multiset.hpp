#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "slicevol/errors.hpp"

namespace slicevol {

/// Default relative clustering tolerance. Gaps below this fraction of the
/// node spread lose more than half the mantissa to cancellation in the
/// distinct-node sum, so such nodes are merged and evaluated confluently.
inline constexpr double kDefaultClusterTol = 1e-9;

/// Sorted distinct breakpoints with multiplicities. The shared input of
/// every closed-form evaluation: breakpoints are strictly increasing and
/// each multiplicity is at least one.
struct NodeMultiset {
    std::vector<double> breakpoints;
    std::vector<int> multiplicities;

    int total() const {
        return std::accumulate(multiplicities.begin(), multiplicities.end(), 0);
    }
    std::size_t distinct() const { return breakpoints.size(); }

    int max_multiplicity() const {
        int m = 0;
        for (int mu : multiplicities) m = std::max(m, mu);
        return m;
    }

    double min_breakpoint() const { return breakpoints.front(); }
    double max_breakpoint() const { return breakpoints.back(); }

    bool operator==(const NodeMultiset&) const = default;
};

/// Sorts `values` and merges runs whose consecutive gap is at most
/// rel_tol * max(1, spread). A merged breakpoint is the arithmetic mean of
/// the raw values it absorbed; multiplicities add up. Exact duplicates
/// always merge.
inline NodeMultiset cluster_nodes(std::span<const double> values,
                                  double rel_tol = kDefaultClusterTol) {
    if (values.empty()) throw InvalidArgument("cluster_nodes: empty input");
    if (!(rel_tol >= 0.0)) throw InvalidArgument("cluster_nodes: rel_tol must be >= 0");
    for (double v : values)
        if (!std::isfinite(v)) throw InvalidArgument("cluster_nodes: non-finite value");

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    const double spread = sorted.back() - sorted.front();
    const double gap_tol = rel_tol * std::max(1.0, spread);

    NodeMultiset out;
    std::size_t run_begin = 0;
    for (std::size_t i = 1; i <= sorted.size(); ++i) {
        if (i == sorted.size() || sorted[i] - sorted[i - 1] > gap_tol) {
            const std::size_t count = i - run_begin;
            double mean = 0.0;
            for (std::size_t j = run_begin; j < i; ++j) mean += sorted[j];
            mean /= static_cast<double>(count);
            out.breakpoints.push_back(mean);
            out.multiplicities.push_back(static_cast<int>(count));
            run_begin = i;
        }
    }
    return out;
}

} // namespace slicevol
