#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace rorlicz {

/// +infinity sentinel used for extended-real values in [0, inf].
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_infinite(double x) { return x == kInf; }

/// Mass times value with the measure-theoretic convention 0 * inf = 0.
inline double ext_mul(double mass, double value) {
    return mass == 0.0 ? 0.0 : mass * value;
}

/// Neumaier compensated summation. Adding +inf saturates.
class CompensatedSum {
public:
    void add(double x) {
        if (!std::isfinite(x) || !std::isfinite(sum_)) {
            sum_ += x;
            return;
        }
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return std::isfinite(sum_) ? sum_ + comp_ : sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_total(std::span<const double> xs) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

} // namespace rorlicz
