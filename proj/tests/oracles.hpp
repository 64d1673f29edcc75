#pragma once

// Independent numerical oracles: fourth-order central differences and
// composite Simpson quadrature.

#include <functional>

namespace oracle {

constexpr double kStep = 1e-3;

inline double d1(const std::function<double(double)>& f, double x, double h = kStep) {
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

inline double d2(const std::function<double(double)>& f, double x, double h = kStep) {
    return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h);
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 200) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return s * h / 3.0;
}

inline double mean(const std::function<double(double)>& f, double a, double b) { return simpson(f, a, b) / (b - a); }

}  // namespace oracle
