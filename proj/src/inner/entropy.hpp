#pragma once

namespace qtanner::inner {

// q-ary entropy H_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x) on [0, 1].
double q_entropy(double x, double q);
// Inverse on the increasing branch [0, 1 - 1/q], by bisection.
double q_entropy_inv(double y, double q);

}  // namespace qtanner::inner
