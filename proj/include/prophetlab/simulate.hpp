#pragma once
#include "prophetlab/rng.hpp"

#include <cstdint>
#include <functional>

namespace prophetlab {

struct SimResult {
    double mean = 0.0;
    double half_width_95 = 0.0; // 1.96 * sample_std / sqrt(trials)
    uint64_t trials = 0;
    uint64_t seed = 0;
};

// Worker threads honored by the Monte Carlo driver: min(hardware,
// PROPHETLAB_THREADS).  Results never depend on this value.
int max_threads();

// Runs `trials` independent trials of `trial`, trial index tau drawing from
// Rng(seed, stream, tau).  Trials are processed in fixed-size chunks whose
// partial sums are reduced in chunk order, so the result is bit-identical for
// a fixed (seed, trials) regardless of thread count.
SimResult run_trials(uint64_t trials, uint64_t seed, uint64_t stream,
                     const std::function<double(uint64_t, Rng&)>& trial);

} // namespace prophetlab
