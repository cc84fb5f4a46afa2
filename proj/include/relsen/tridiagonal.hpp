#pragma once

#include <span>
#include <vector>

namespace relsen {

/// Solves A x = rhs for tridiagonal A by forward elimination and back
/// substitution (Thomas algorithm). `lower[i]` multiplies x[i-1] in row i
/// (lower[0] unused), `upper[i]` multiplies x[i+1] (upper[n-1] unused).
/// No pivoting: intended for diagonally dominant systems. Throws
/// SingularSystem on a zero pivot.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

}  // namespace relsen
