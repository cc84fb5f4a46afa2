#pragma once

// Reference computations used to check the engine. None of these call into
// the library's numerical code; they work from the loss definitions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

/// Gaussian elimination with partial pivoting in long double.
inline Vec dense_solve(Mat a, Vec b) {
    const std::size_t n = b.size();
    std::vector<std::vector<long double>> m(n, std::vector<long double>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
        m[i][n] = b[i];
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
        if (m[piv][col] == 0.0L) throw std::runtime_error("dense_solve: singular");
        std::swap(m[col], m[piv]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const long double f = m[r][col] / m[col][col];
            for (std::size_t j = col; j <= n; ++j) m[r][j] -= f * m[col][j];
        }
    }
    std::vector<long double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        long double acc = m[i][n];
        for (std::size_t j = i + 1; j < n; ++j) acc -= m[i][j] * x[j];
        x[i] = acc / m[i][i];
    }
    return Vec(x.begin(), x.end());
}

/// Least squares with intercept from the uncentered normal equations
/// [X 1]^T [X 1] beta = [X 1]^T y. Returns weights followed by the bias.
inline Vec normal_equations(const Mat& x, const Vec& y) {
    const std::size_t d = x.front().size();
    Mat a(d + 1, Vec(d + 1, 0.0));
    Vec rhs(d + 1, 0.0);
    std::vector<std::vector<long double>> acc(d + 1, std::vector<long double>(d + 1, 0.0L));
    std::vector<long double> racc(d + 1, 0.0L);
    for (std::size_t i = 0; i < x.size(); ++i) {
        Vec row = x[i];
        row.push_back(1.0);
        for (std::size_t j = 0; j <= d; ++j) {
            racc[j] += static_cast<long double>(row[j]) * y[i];
            for (std::size_t k = 0; k <= d; ++k) acc[j][k] += static_cast<long double>(row[j]) * row[k];
        }
    }
    for (std::size_t j = 0; j <= d; ++j) {
        rhs[j] = static_cast<double>(racc[j]);
        for (std::size_t k = 0; k <= d; ++k) a[j][k] = static_cast<double>(acc[j][k]);
    }
    return dense_solve(a, rhs);
}

/// Golden-section search for the minimum of a unimodal f on [lo, hi].
inline double golden_min(const std::function<double(double)>& f, double lo, double hi,
                         int iterations = 200) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iterations && b - a > 1e-13; ++i) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - phi * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + phi * (b - a); fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

/// Cyclic coordinate minimization of a convex f over a box using golden
/// sections, followed by a Newton polish per coordinate from finite
/// differences.
inline Vec coordinate_minimize(const std::function<double(const Vec&)>& f, Vec x, double lo,
                               double hi, int sweeps = 4) {
    for (int s = 0; s < sweeps; ++s) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            auto g = [&](double v) {
                Vec y = x;
                y[i] = v;
                return f(y);
            };
            x[i] = golden_min(g, lo, hi);
            // The 1-D restriction of a quadratic is recovered exactly from
            // three samples; one Newton step lands on its vertex.
            const double h = 1e-3;
            const double fm = g(x[i] - h), f0 = g(x[i]), fp = g(x[i] + h);
            const double curv = (fp - 2.0 * f0 + fm) / (h * h);
            if (curv > 0.0) {
                const double step = (fp - fm) / (2.0 * h) / curv;
                if (g(x[i] - step) <= f0) x[i] -= step;
            }
        }
    }
    return x;
}

/// Minimizes sum_s a_s c_s subject to sum_s exp(-c_s) = 1 by damped Newton
/// on the softmax parametrization exp(-c) = softmax(theta), theta_n = 0.
/// All a_s must be positive.
inline Vec constrained_linear_min(const Vec& a) {
    const std::size_t n = a.size();
    if (n == 1) return {0.0};
    const double total = std::accumulate(a.begin(), a.end(), 0.0);
    Vec theta(n, 0.0);
    auto lse = [&](const Vec& th) {
        const double mx = *std::max_element(th.begin(), th.end());
        double s = 0.0;
        for (double v : th) s += std::exp(v - mx);
        return mx + std::log(s);
    };
    auto objective = [&](const Vec& th) {
        const double l = lse(th);
        double f = 0.0;
        for (std::size_t i = 0; i < n; ++i) f += a[i] * (l - th[i]);
        return f;
    };
    for (int iter = 0; iter < 200; ++iter) {
        const double l = lse(theta);
        Vec p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = std::exp(theta[i] - l);
        Vec grad(n - 1);
        double gnorm = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            grad[i] = total * p[i] - a[i];
            gnorm = std::max(gnorm, std::fabs(grad[i]));
        }
        if (gnorm < 1e-15 * total) break;
        Mat h(n - 1, Vec(n - 1));
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = 0; j + 1 < n; ++j)
                h[i][j] = total * ((i == j ? p[i] : 0.0) - p[i] * p[j]);
        Vec neg(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) neg[i] = -grad[i];
        const Vec step = dense_solve(h, neg);
        double t = 1.0;
        const double f0 = objective(theta);
        Vec trial = theta;
        for (int k = 0; k < 60; ++k) {
            for (std::size_t i = 0; i + 1 < n; ++i) trial[i] = theta[i] + t * step[i];
            if (objective(trial) <= f0) break;
            t *= 0.5;
        }
        if (trial == theta) break;
        theta = trial;
    }
    const double l = lse(theta);
    Vec c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = l - theta[i];
    return c;
}

}  // namespace oracle
