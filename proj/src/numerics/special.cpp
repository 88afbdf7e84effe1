#include "optomech/numerics/special.hpp"

#include <cmath>
#include <string>

#include "optomech/error.hpp"

namespace optomech::numerics {

double assoc_laguerre(int n, int k, double x) {
  if (n < 0 || k < 0) throw DomainError("assoc_laguerre: negative order");
  if (n > 200 || k > 200) throw DomainError("assoc_laguerre: order exceeds 200");
  if (!std::isfinite(x)) throw DomainError("assoc_laguerre: non-finite argument");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + k - x;
  // (i+1) L_{i+1} = (2i+1+k-x) L_i - (i+k) L_{i-1}
  for (int i = 1; i < n; ++i) {
    const double next = ((2.0 * i + 1.0 + k - x) * cur - (i + k) * prev) / (i + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: negative argument " + std::to_string(n));
  return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace optomech::numerics
