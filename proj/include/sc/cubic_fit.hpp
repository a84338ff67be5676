#pragma once

#include <array>
#include <span>

namespace sc {

// Least-squares third-order polynomial y = c0 + c1 x + c2 x^2 + c3 x^3.
struct CubicFit {
    std::array<double, 4> coefficients{};
    double rms_residual = 0.0;
    double r_squared = 1.0;

    double operator()(double x) const {
        return ((coefficients[3] * x + coefficients[2]) * x + coefficients[1]) * x +
               coefficients[0];
    }
};

// Normal-equation fit with x affinely rescaled to [-1, 1] for conditioning;
// coefficients are mapped back to the original x domain. Throws
// DegenerateSystem with fewer than 4 points or fewer than 4 distinct x.
CubicFit fit_cubic(std::span<const double> xs, std::span<const double> ys);

}  // namespace sc
