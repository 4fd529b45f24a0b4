#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rorlicz/kernels.hpp"

using namespace rorlicz;

namespace {
struct Data {
    std::vector<double> w, x, logw, logx;
};
Data make(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Data d;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d.w.push_back(u(rng));
        s += d.w.back();
        d.x.push_back(3.0 * u(rng));
    }
    for (auto& v : d.w) v /= s;
    for (std::size_t i = 0; i < n; ++i) {
        d.logw.push_back(std::log(d.w[i]));
        d.logx.push_back(std::log(d.x[i]));
    }
    return d;
}
} // namespace

TEST(Kernels, ParallelResultIndependentOfWorkerCount) {
    const auto d = make(50000, 1);
    const auto phi = OrliczFunction::exponential(0.8);
    set_worker_count(1);
    const double a = phi_expectation(phi, d.w, d.x, 1.7, Exec::Parallel);
    const double la = log_power_moment(d.logw, d.logx, 5.0, Exec::Parallel);
    set_worker_count(4);
    const double b = phi_expectation(phi, d.w, d.x, 1.7, Exec::Parallel);
    const double lb = log_power_moment(d.logw, d.logx, 5.0, Exec::Parallel);
    set_worker_count(1);
    EXPECT_EQ(a, b);
    EXPECT_EQ(la, lb);
}

TEST(Kernels, SerialAndParallelAgree) {
    const auto d = make(30000, 2);
    const auto phi = OrliczFunction::power(2.5);
    const double s = phi_expectation(phi, d.w, d.x, 0.9, Exec::Serial);
    const double p = phi_expectation(phi, d.w, d.x, 0.9, Exec::Parallel);
    EXPECT_NEAR(s, p, 1e-14 * s);
    EXPECT_NEAR(weighted_sum(d.w, d.x, Exec::Serial), weighted_sum(d.w, d.x, Exec::Parallel), 1e-14);
}

TEST(Kernels, MomentsMatchNaiveLoop) {
    const auto d = make(2000, 3);
    const auto m = power_moments(d.w, d.x, 6, Exec::Parallel);
    for (int n = 1; n <= 6; ++n) {
        long double s = 0.0L;
        for (std::size_t i = 0; i < d.w.size(); ++i) s += d.w[i] * std::pow(static_cast<long double>(d.x[i]), n);
        EXPECT_NEAR(m[n - 1], static_cast<double>(s), 1e-12 * static_cast<double>(s));
        const double lm = log_power_moment(d.logw, d.logx, n, Exec::Serial);
        EXPECT_NEAR(std::exp(lm), static_cast<double>(s), 1e-12 * static_cast<double>(s));
    }
}

TEST(Kernels, ZeroTimesInfinityIsZero) {
    const std::vector<double> w{0.0, 1.0}, x{5.0, 0.5};
    EXPECT_EQ(phi_expectation(OrliczFunction::ess_sup_indicator(), w, x, 1.0, Exec::Serial), 0.0);
    const std::vector<double> g{INFINITY, 2.0};
    EXPECT_EQ(weighted_sum(w, g, Exec::Parallel), 2.0);
}
