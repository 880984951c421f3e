#pragma once

#include <cstdint>
#include <vector>

namespace lexalign {

struct pearson_result {
    double r = 0.0;
    double p_value = 1.0;
};

/// Sample Pearson correlation with a two-sided p-value from the
/// t-distribution with n-2 degrees of freedom. Requires n >= 3 and nonzero
/// variance in both series.
pearson_result pearson(const std::vector<double>& xs, const std::vector<double>& ys);

/// Two-sided paired sign-flip permutation test on a - b. Enumerates all 2^n
/// flips when that count fits in `resamples`, otherwise draws `resamples`
/// random flips from the given seed (with the +1 correction).
double paired_permutation_test(const std::vector<double>& a, const std::vector<double>& b,
                               uint64_t resamples, uint64_t seed);

} // namespace lexalign
