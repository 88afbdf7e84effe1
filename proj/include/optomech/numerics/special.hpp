#pragma once

namespace optomech::numerics {

/// Generalized Laguerre polynomial L_n^(k)(x) from the three-term recurrence in n.
/// Requires n, k <= 200 and a finite x; negative orders raise DomainError.
double assoc_laguerre(int n, int k, double x);

/// log(n!) for n >= 0.
double log_factorial(int n);

}  // namespace optomech::numerics
