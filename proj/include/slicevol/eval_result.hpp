#pragma once

namespace slicevol {

/// Cancellation index above which a result is flagged low-confidence
/// instead of rejected.
inline constexpr double kLowConfidenceKappa = 1e8;

/// A closed-form value together with its conditioning diagnostic.
struct EvalResult {
    double value = 0.0;
    double kappa = 1.0;         // cancellation index of the underlying sum
    bool low_confidence = false; // kappa > kLowConfidenceKappa
    bool one_sided = false;      // threshold hit a kink; one-sided value returned

    operator double() const { return value; }
};

inline EvalResult make_result(double value, double kappa, bool one_sided = false) {
    return {value, kappa, kappa > kLowConfidenceKappa, one_sided};
}

} // namespace slicevol
