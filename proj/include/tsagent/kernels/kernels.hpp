#pragma once

// Reductions shared by the metrics and feature code. Each entry point
// dispatches once per process to the widest instruction set the CPU
// supports; the scalar versions are the reference.

#include <span>
#include <string_view>

namespace tsagent::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);
bool isa_supported(Isa isa);

/// The instruction set currently used by the dispatching entry points.
Isa active_isa();

/// Pins dispatch to `isa` (tests and benchmarks). Returns false if unsupported.
bool force_isa(Isa isa);

double sum(std::span<const double> x);

/// Σ (x_i - center)^2
double sum_sq_dev(std::span<const double> x, double center);

/// Σ (a_i - center)(b_i - center); a and b have equal length.
double centered_dot(std::span<const double> a, std::span<const double> b, double center);

/// Σ |a_i - b_i|
double sum_abs_diff(std::span<const double> a, std::span<const double> b);

/// Σ pinball(actual_i, predicted_i, tau)
double pinball_sum(std::span<const double> actual, std::span<const double> predicted, double tau);

/// Per-ISA implementations, exposed so the test suite can check them against each other.
namespace scalar {
double sum(std::span<const double> x);
double sum_sq_dev(std::span<const double> x, double center);
double centered_dot(std::span<const double> a, std::span<const double> b, double center);
double sum_abs_diff(std::span<const double> a, std::span<const double> b);
double pinball_sum(std::span<const double> actual, std::span<const double> predicted, double tau);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define TSAGENT_HAVE_AVX2_KERNELS 1
namespace avx2 {
double sum(std::span<const double> x);
double sum_sq_dev(std::span<const double> x, double center);
double centered_dot(std::span<const double> a, std::span<const double> b, double center);
double sum_abs_diff(std::span<const double> a, std::span<const double> b);
double pinball_sum(std::span<const double> actual, std::span<const double> predicted, double tau);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define TSAGENT_HAVE_NEON_KERNELS 1
namespace neon {
double sum(std::span<const double> x);
double sum_sq_dev(std::span<const double> x, double center);
double centered_dot(std::span<const double> a, std::span<const double> b, double center);
double sum_abs_diff(std::span<const double> a, std::span<const double> b);
double pinball_sum(std::span<const double> actual, std::span<const double> predicted, double tau);
}  // namespace neon
#endif

}  // namespace tsagent::kernels
