#pragma once

#include "divsum/quadpoly.hpp"

namespace divsum::fixtures {

// x1^2 + x2^2 + x3^2
inline QuadraticPolynomial q3() { return {3, {1, 0, 0, 0, 1, 0, 0, 0, 1}, {0, 0, 0}, 0}; }

// x1 x2 + x3^2; Q + Q^t has the indefinite block [[0,1],[1,0]].
inline QuadraticPolynomial w3() { return {3, {0, 1, 0, 0, 0, 0, 0, 0, 1}, {0, 0, 0}, 0}; }

// (x1 + x2)^2 + x3^2, singular symmetrized matrix.
inline QuadraticPolynomial degenerate3() { return {3, {1, 2, 0, 0, 1, 0, 0, 0, 1}, {0, 0, 0}, 0}; }

inline QuadraticPolynomial negative_q3() { return {3, {-1, 0, 0, 0, -1, 0, 0, 0, -1}, {0, 0, 0}, 0}; }

// Q3 + x1 + x2 + x3 + 5
inline QuadraticPolynomial q3_shifted() { return {3, {1, 0, 0, 0, 1, 0, 0, 0, 1}, {1, 1, 1}, 5}; }

// 2 x1^2 + x1 x2 - x2 x3 + 3 x3^2 + x1 - 2 x3 + 7 (mixed signs, non-symmetric Q)
inline QuadraticPolynomial mixed3() { return {3, {2, 1, 0, 0, 0, -1, 0, 0, 3}, {1, 0, -2}, 7}; }

// t^2 in one variable, used only by the diagnostics.
inline QuadraticPolynomial square1() { return {1, {1}, {0}, 0}; }

// sum of six squares, for the Monte Carlo path
inline QuadraticPolynomial q6() {
  std::vector<i64> q(36, 0);
  for (int i = 0; i < 6; ++i) q[static_cast<std::size_t>(7 * i)] = 1;
  return {6, q, std::vector<i64>(6, 0), 0};
}

}  // namespace divsum::fixtures
