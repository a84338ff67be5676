#include "sc/cubic_fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sc/errors.hpp"

namespace sc {

namespace {

// Solves the 4x4 system M x = b with partial pivoting.
std::array<long double, 4> solve4(std::array<std::array<long double, 4>, 4> m,
                                  std::array<long double, 4> b) {
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r) {
            if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
        }
        if (m[pivot][col] == 0.0L) throw DegenerateSystem("singular normal equations");
        std::swap(m[col], m[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = col + 1; r < 4; ++r) {
            const long double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<long double, 4> x{};
    for (int r = 3; r >= 0; --r) {
        long double acc = b[r];
        for (int c = r + 1; c < 4; ++c) acc -= m[r][c] * x[c];
        x[r] = acc / m[r][r];
    }
    return x;
}

}  // namespace

CubicFit fit_cubic(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw LengthMismatch("fit_cubic: xs and ys lengths differ");
    const std::size_t n = xs.size();
    if (n < 4) throw DegenerateSystem("fit_cubic: need at least 4 points");
    std::vector<double> distinct(xs.begin(), xs.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 4) throw DegenerateSystem("fit_cubic: need at least 4 distinct x values");

    const double x_min = distinct.front();
    const double x_max = distinct.back();
    // t = scale * x + offset maps [x_min, x_max] onto [-1, 1].
    const double scale = 2.0 / (x_max - x_min);
    const double offset = -(x_max + x_min) / (x_max - x_min);

    std::array<long double, 7> pow_sums{};  // sum of t^k, k = 0..6
    std::array<long double, 4> rhs{};       // sum of y * t^k, k = 0..3
    for (std::size_t i = 0; i < n; ++i) {
        const long double t = scale * static_cast<long double>(xs[i]) + offset;
        long double tk = 1.0L;
        for (int k = 0; k <= 6; ++k) {
            pow_sums[k] += tk;
            if (k <= 3) rhs[k] += ys[i] * tk;
            tk *= t;
        }
    }
    std::array<std::array<long double, 4>, 4> normal{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) normal[r][c] = pow_sums[r + c];
    const std::array<long double, 4> d = solve4(normal, rhs);

    // Expand sum_k d_k (scale * x + offset)^k into powers of x.
    CubicFit fit;
    std::array<long double, 4> coeff{};
    for (int k = 0; k <= 3; ++k) {
        static const int binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
        long double s_pow = 1.0L;
        for (int j = 0; j <= k; ++j) {
            long double o_pow = 1.0L;
            for (int m = 0; m < k - j; ++m) o_pow *= offset;
            coeff[j] += d[k] * binom[k][j] * s_pow * o_pow;
            s_pow *= scale;
        }
    }
    for (int j = 0; j <= 3; ++j) fit.coefficients[j] = static_cast<double>(coeff[j]);

    long double ss_res = 0.0L;
    long double y_sum = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const long double t = scale * static_cast<long double>(xs[i]) + offset;
        const long double p = ((d[3] * t + d[2]) * t + d[1]) * t + d[0];
        const long double r = ys[i] - p;
        ss_res += r * r;
        y_sum += ys[i];
    }
    const long double y_mean = y_sum / static_cast<long double>(n);
    long double ss_tot = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const long double dmean = ys[i] - y_mean;
        ss_tot += dmean * dmean;
    }
    fit.rms_residual = static_cast<double>(std::sqrt(ss_res / static_cast<long double>(n)));
    fit.r_squared = ss_tot == 0.0L ? 1.0 : static_cast<double>(1.0L - ss_res / ss_tot);
    return fit;
}

}  // namespace sc
