#include "relsen/tridiagonal.hpp"

#include <cmath>

#include "relsen/errors.hpp"

namespace relsen {

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
    const auto n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n)
        throw SingularSystem("tridiagonal bands and right-hand side differ in length");
    std::vector<double> x(n);
    if (n == 0) return x;

    std::vector<double> c_star(n, 0.0);
    std::vector<double> d_star(n, 0.0);

    double pivot = diag[0];
    if (pivot == 0.0 || !std::isfinite(pivot)) throw SingularSystem("zero pivot in row 0");
    c_star[0] = n > 1 ? upper[0] / pivot : 0.0;
    d_star[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i] * c_star[i - 1];
        if (pivot == 0.0 || !std::isfinite(pivot))
            throw SingularSystem("zero pivot in row " + std::to_string(i));
        c_star[i] = i + 1 < n ? upper[i] / pivot : 0.0;
        d_star[i] = (rhs[i] - lower[i] * d_star[i - 1]) / pivot;
    }

    x[n - 1] = d_star[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d_star[i] - c_star[i] * x[i + 1];
    return x;
}

}  // namespace relsen
