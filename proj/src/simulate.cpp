#include "prophetlab/simulate.hpp"
#include "prophetlab/errors.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <vector>

namespace prophetlab {

int max_threads() {
    static const int cached = [] {
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (hw <= 0) hw = 1;
        if (const char* env = std::getenv("PROPHETLAB_THREADS")) {
            int v = std::atoi(env);
            if (v >= 1 && v < hw) hw = v;
            if (v >= 1 && v >= hw) hw = v > 64 ? 64 : v;
        }
        return hw;
    }();
    return cached;
}

SimResult run_trials(uint64_t trials, uint64_t seed, uint64_t stream,
                     const std::function<double(uint64_t, Rng&)>& trial) {
    if (trials == 0) throw domain_error("run_trials needs trials >= 1");
    constexpr uint64_t kChunk = 16384;
    uint64_t n_chunks = (trials + kChunk - 1) / kChunk;

    struct Partial {
        double sum = 0.0, sumsq = 0.0;
    };
    std::vector<Partial> partials(n_chunks);

    std::atomic<uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= n_chunks) return;
            uint64_t lo = c * kChunk;
            uint64_t hi = std::min(trials, lo + kChunk);
            double s = 0.0, s2 = 0.0;
            for (uint64_t tau = lo; tau < hi; ++tau) {
                Rng rng(seed, stream, tau);
                double x = trial(tau, rng);
                s += x;
                s2 += x * x;
            }
            partials[c].sum = s;
            partials[c].sumsq = s2;
        }
    };

    int threads = max_threads();
    if (n_chunks < static_cast<uint64_t>(threads)) threads = static_cast<int>(n_chunks);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    double sum = 0.0, sumsq = 0.0;
    for (const Partial& p : partials) {
        sum += p.sum;
        sumsq += p.sumsq;
    }
    SimResult res;
    res.trials = trials;
    res.seed = seed;
    res.mean = sum / static_cast<double>(trials);
    if (trials > 1) {
        double var =
            (sumsq - sum * res.mean) / static_cast<double>(trials - 1);
        if (var < 0.0) var = 0.0;
        res.half_width_95 = 1.96 * std::sqrt(var / static_cast<double>(trials));
    }
    return res;
}

} // namespace prophetlab
