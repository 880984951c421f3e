#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace lexalign {

/// Deterministic random number generation used everywhere randomness is
/// needed. The generator is xoshiro256** 1.0 (Blackman/Vigna), seeded through
/// splitmix64. Both algorithms are fixed by this library's file-format and
/// report contracts: the same seed must yield the same corpora and estimates
/// on every platform, so std::<distribution> facilities are deliberately not
/// used.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class rng {
  public:
    explicit rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& word : m_state) word = splitmix64(sm);
    }

    /// Child stream for worker `index`; streams derived from distinct indices
    /// are statistically independent, which keeps parallel sampling
    /// deterministic under any thread count.
    rng split(uint64_t index) const {
        uint64_t sm = m_state[0] ^ (0xd1342543de82ef95ULL * (index + 1));
        return rng(splitmix64(sm));
    }

    uint64_t next_u64() {
        uint64_t* s = m_state;
        uint64_t result = rotl(s[1] * 5, 7) * 9;
        uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) without modulo bias.
    uint64_t next_below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    /// Poisson draw by Knuth's product method, decomposed into chunks so the
    /// running product never underflows for large means.
    uint64_t next_poisson(double mean) {
        uint64_t total = 0;
        while (mean > 32.0) {
            total += poisson_knuth(32.0);
            mean -= 32.0;
        }
        return total + poisson_knuth(mean);
    }

    /// Standard normal via Box-Muller.
    double next_gaussian() {
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = next_double();
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t poisson_knuth(double mean) {
        if (mean <= 0.0) return 0;
        double limit = std::exp(-mean);
        double product = next_double();
        uint64_t count = 0;
        while (product > limit) {
            ++count;
            product *= next_double();
        }
        return count;
    }

    uint64_t m_state[4];
};

/// Samples indices from a fixed discrete distribution by inverse-CDF binary
/// search over the cumulative weights.
class discrete_sampler {
  public:
    explicit discrete_sampler(const std::vector<double>& weights) {
        m_cdf.reserve(weights.size());
        double acc = 0.0;
        for (double w : weights) {
            acc += w;
            m_cdf.push_back(acc);
        }
        m_total = acc;
    }

    size_t sample(rng& gen) const {
        double u = gen.next_double() * m_total;
        size_t lo = 0, hi = m_cdf.size() - 1;
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (m_cdf[mid] <= u)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

  private:
    std::vector<double> m_cdf;
    double m_total = 0.0;
};

} // namespace lexalign
