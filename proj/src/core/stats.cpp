#include "core/stats.hpp"

#include <cmath>
#include <cstdlib>

#include <boost/math/distributions/students_t.hpp>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace lexalign {

pearson_result pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) raise(errc::invalid_argument, "pearson: length mismatch");
    size_t n = xs.size();
    if (n < 3) raise(errc::invalid_argument, "pearson needs at least three points");
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0)
        raise(errc::invalid_argument, "pearson is undefined for a constant series");
    pearson_result out;
    out.r = sxy / std::sqrt(sxx * syy);
    double r2 = out.r * out.r;
    if (r2 >= 1.0) {
        out.p_value = 0.0;
        return out;
    }
    double df = static_cast<double>(n - 2);
    double t = std::fabs(out.r) * std::sqrt(df / (1.0 - r2));
    boost::math::students_t_distribution<double> dist(df);
    out.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
    return out;
}

double paired_permutation_test(const std::vector<double>& a, const std::vector<double>& b,
                               uint64_t resamples, uint64_t seed) {
    if (a.size() != b.size())
        raise(errc::invalid_argument, "paired test: series lengths differ");
    size_t n = a.size();
    if (n < 2) raise(errc::invalid_argument, "paired test needs at least two pairs");

    std::vector<double> diff(n);
    double observed = 0.0;
    for (size_t i = 0; i < n; ++i) {
        diff[i] = a[i] - b[i];
        observed += diff[i];
    }
    observed = std::fabs(observed / n);

    bool exhaustive = n < 63 && (1ULL << n) <= resamples;
    if (exhaustive) {
        uint64_t total = 1ULL << n;
        uint64_t hits = 0;
        for (uint64_t mask = 0; mask < total; ++mask) {
            double sum = 0.0;
            for (size_t i = 0; i < n; ++i)
                sum += (mask >> i) & 1ULL ? -diff[i] : diff[i];
            if (std::fabs(sum / n) >= observed - 1e-15) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(total);
    }

    rng gen(seed);
    uint64_t hits = 0;
    for (uint64_t rep = 0; rep < resamples; ++rep) {
        double sum = 0.0;
        uint64_t bits = 0;
        int avail = 0;
        for (size_t i = 0; i < n; ++i) {
            if (avail == 0) {
                bits = gen.next_u64();
                avail = 64;
            }
            sum += (bits & 1ULL) ? -diff[i] : diff[i];
            bits >>= 1;
            --avail;
        }
        if (std::fabs(sum / n) >= observed - 1e-15) ++hits;
    }
    return static_cast<double>(hits + 1) / static_cast<double>(resamples + 1);
}

} // namespace lexalign
