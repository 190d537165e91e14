#include "tsagent/core/parallel.hpp"

namespace tsagent {

namespace {
std::atomic<std::size_t> g_jobs{0};
}

std::size_t default_jobs() {
    const std::size_t configured = g_jobs.load(std::memory_order_relaxed);
    if (configured > 0) return configured;
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void set_default_jobs(std::size_t jobs) { g_jobs.store(jobs, std::memory_order_relaxed); }

}  // namespace tsagent
