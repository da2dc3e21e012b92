#include "inner/entropy.hpp"

#include <cmath>
#include <string>

#include "util/error.hpp"

namespace qtanner::inner {

namespace {

double xlogx(double x) { return x <= 0 ? 0.0 : x * std::log(x); }

void check_q(double q) {
  if (!(q >= 2) || !std::isfinite(q)) throw DomainError("entropy base q must be at least 2");
}

}  // namespace

double q_entropy(double x, double q) {
  check_q(q);
  if (!(x >= 0 && x <= 1)) throw DomainError("q_entropy: x must lie in [0, 1], got " + std::to_string(x));
  const double lq = std::log(q);
  return (x * std::log(q - 1) - xlogx(x) - xlogx(1 - x)) / lq;
}

double q_entropy_inv(double y, double q) {
  check_q(q);
  if (!(y >= 0 && y <= 1)) throw DomainError("q_entropy_inv: y must lie in [0, 1], got " + std::to_string(y));
  double lo = 0, hi = 1 - 1 / q;
  if (y == 0) return 0;
  if (y == 1) return hi;
  for (int it = 0; it < 2000; ++it) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    if (q_entropy(mid, q) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(q_entropy(lo, q) - y) <= std::abs(q_entropy(hi, q) - y) ? lo : hi;
}

}  // namespace qtanner::inner
