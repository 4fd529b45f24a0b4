#include "rorlicz/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

#include "rorlicz/extended_real.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rorlicz {

namespace {

std::atomic<int> g_exec{static_cast<int>(Exec::Parallel)};
std::atomic<int> g_workers{0};

int read_thread_env() {
    if (const char* s = std::getenv("ROBUST_ORLICZ_THREADS")) {
        try {
            const int n = std::stoi(s);
            if (n > 0) return n;
        } catch (...) {
        }
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

std::size_t block_count(std::size_t n) { return (n + kReduceBlock - 1) / kReduceBlock; }

// Evaluates term(i) over [0, n), one compensated partial per block, then
// combines the partials in order.
template <class Term>
double blocked_sum(std::size_t n, Exec exec, Term term) {
    if (exec == Exec::Serial) {
        CompensatedSum s;
        for (std::size_t i = 0; i < n; ++i) s.add(term(i));
        return s.value();
    }
    const std::size_t nb = block_count(n);
    std::vector<double> partial(nb, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(worker_count()) if (nb > 1 && worker_count() > 1)
#endif
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
        CompensatedSum s;
        const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
        const std::size_t hi = std::min(n, lo + kReduceBlock);
        for (std::size_t i = lo; i < hi; ++i) s.add(term(i));
        partial[static_cast<std::size_t>(b)] = s.value();
    }
    return compensated_total(partial);
}

} // namespace

Exec default_exec() { return static_cast<Exec>(g_exec.load()); }
void set_default_exec(Exec e) { g_exec.store(static_cast<int>(e)); }

int worker_count() {
    int n = g_workers.load();
    if (n <= 0) {
        n = read_thread_env();
        g_workers.store(n);
    }
    return n;
}

void set_worker_count(int n) { g_workers.store(n > 0 ? n : 1); }

bool parallel_available() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

double weighted_sum(std::span<const double> w, std::span<const double> g, Exec exec) {
    return blocked_sum(w.size(), exec, [&](std::size_t i) { return ext_mul(w[i], g[i]); });
}

double phi_expectation(const OrliczFunction& phi, std::span<const double> w, std::span<const double> x,
                       double lambda, Exec exec) {
    return blocked_sum(w.size(), exec, [&](std::size_t i) { return ext_mul(w[i], phi(x[i] / lambda)); });
}

double log_power_moment(std::span<const double> logw, std::span<const double> logx, double k, Exec exec) {
    const std::size_t n = logw.size();
    if (n == 0) return -kInf;
    double m = -kInf;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, logw[i] + k * logx[i]);
    if (!std::isfinite(m)) return m;
    const double s = blocked_sum(n, exec, [&](std::size_t i) { return std::exp(logw[i] + k * logx[i] - m); });
    return m + std::log(s);
}

std::vector<double> power_moments(std::span<const double> w, std::span<const double> x, int n_max, Exec exec) {
    std::vector<double> out(static_cast<std::size_t>(std::max(n_max, 0)));
    if (exec == Exec::Parallel && worker_count() > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
#endif
        for (int n = 1; n <= n_max; ++n) {
            CompensatedSum s;
            for (std::size_t i = 0; i < w.size(); ++i) s.add(ext_mul(w[i], std::pow(x[i], n)));
            out[static_cast<std::size_t>(n - 1)] = s.value();
        }
        return out;
    }
    for (int n = 1; n <= n_max; ++n) {
        CompensatedSum s;
        for (std::size_t i = 0; i < w.size(); ++i) s.add(ext_mul(w[i], std::pow(x[i], n)));
        out[static_cast<std::size_t>(n - 1)] = s.value();
    }
    return out;
}

} // namespace rorlicz
