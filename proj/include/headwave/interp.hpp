#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace headwave {

// Monotone cubic Hermite interpolant (Fritsch-Carlson slope limiting).
// Preserves monotonicity of the data, which is what makes it safe for
// inverting cumulative arc length and for resampling along gamma_1.
class MonotoneCubic {
public:
    static MonotoneCubic fit(std::vector<double> x, std::vector<double> y) {
        const std::size_t n = x.size();
        if (n < 2 || y.size() != n)
            throw std::invalid_argument("MonotoneCubic: need >= 2 matching nodes");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x[i] > x[i - 1]))
                throw std::invalid_argument("MonotoneCubic: x must be strictly increasing");

        std::vector<double> delta(n - 1), m(n);
        for (std::size_t i = 0; i + 1 < n; ++i)
            delta[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        m[0] = delta[0];
        m[n - 1] = delta[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0)
                m[i] = 0.0;
            else {
                // weighted harmonic mean keeps the interpolant monotone
                const double w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
                const double w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
                m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (delta[i] == 0.0) {
                m[i] = m[i + 1] = 0.0;
            } else {
                const double a = m[i] / delta[i];
                const double b = m[i + 1] / delta[i];
                const double s = a * a + b * b;
                if (s > 9.0) {
                    const double tau = 3.0 / std::sqrt(s);
                    m[i] = tau * a * delta[i];
                    m[i + 1] = tau * b * delta[i];
                }
            }
        }
        MonotoneCubic mc;
        mc.x_ = std::move(x);
        mc.y_ = std::move(y);
        mc.m_ = std::move(m);
        return mc;
    }

    double operator()(double q) const {
        const std::size_t n = x_.size();
        if (q <= x_.front()) return y_.front() + m_.front() * (q - x_.front());
        if (q >= x_.back()) return y_.back() + m_.back() * (q - x_.back());
        const auto it = std::upper_bound(x_.begin(), x_.end(), q);
        const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
        const double h = x_[i + 1] - x_[i];
        const double t = (q - x_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1;
        const double h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2;
        const double h11 = t3 - t2;
        return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    std::vector<double> x_, y_, m_;
};

} // namespace headwave
