#pragma once
#include <cstdint>

namespace prophetlab {

inline uint64_t mix64(uint64_t x) {
    x ^= x >> 30; x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27; x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Counter-based generator keyed by (seed, stream, trial).  Every cell is an
// independent deterministic sequence, so parallel trials partitioned by trial
// index reproduce bit-identically regardless of thread count.
class Rng {
public:
    Rng(uint64_t seed, uint64_t stream, uint64_t trial)
        : state_(mix64(mix64(seed ^ 0x2545f4914f6cdd1dULL) ^
                       (0x9e3779b97f4a7c15ULL * (stream + 1)) ^
                       mix64(trial ^ 0x632be59bd9b4e019ULL))) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform on [0,1).
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe as a log() argument.
    double unit_pos() { return 1.0 - unit(); }

    // Uniform integer in [0, n).  Multiply-shift; deterministic and unbiased
    // enough for simulation work.
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    bool bernoulli(double prob) { return unit() < prob; }

private:
    uint64_t state_;
};

// Stream ids: fixed small constants so that independent random sources inside
// one trial never collide.
namespace streams {
constexpr uint64_t kTimestamps = 1;
constexpr uint64_t kPolicySim = 2;
constexpr uint64_t kRounding = 3;
constexpr uint64_t kSubsetSample = 4;
constexpr uint64_t kBaseline = 5;
constexpr uint64_t kIidRule = 6;
} // namespace streams

} // namespace prophetlab
