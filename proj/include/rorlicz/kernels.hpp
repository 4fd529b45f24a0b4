#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rorlicz/orlicz_function.hpp"

namespace rorlicz {

enum class Exec { Serial, Parallel };

/// Block size of the deterministic parallel reductions. Partial sums are
/// formed per block and combined in block order, so parallel results do not
/// depend on the thread count.
inline constexpr std::size_t kReduceBlock = 4096;

/// Process-wide default used by the compute modules.
Exec default_exec();
void set_default_exec(Exec e);

/// Worker count; reads ROBUST_ORLICZ_THREADS once on first use.
int worker_count();
void set_worker_count(int n);

bool parallel_available();

/// sum_i w_i g_i with 0 * inf = 0.
double weighted_sum(std::span<const double> w, std::span<const double> g, Exec exec);

/// sum_i w_i phi(x_i / lambda) with 0 * inf = 0; x_i >= 0, lambda > 0.
double phi_expectation(const OrliczFunction& phi, std::span<const double> w, std::span<const double> x,
                       double lambda, Exec exec);

/// log sum_i exp(logw_i + k * logx_i); -inf for an empty sum.
double log_power_moment(std::span<const double> logw, std::span<const double> logx, double k, Exec exec);

/// E|X|^n for n = 1..n_max under weights w (x_i >= 0).
std::vector<double> power_moments(std::span<const double> w, std::span<const double> x, int n_max, Exec exec);

} // namespace rorlicz
