// Test-only reference implementations, independent of the library's Eigen
// code paths: a cyclic Jacobi eigensolver for symmetric matrices, singular
// values derived from it, and a literal re-implementation of the
// stack-replacement rule.
#pragma once

#include <cmath>
#include <vector>

#include "claeo/history_stack.hpp"
#include "claeo/types.hpp"

namespace oracle {

using claeo::Mat;
using claeo::Vec;

// Cyclic Jacobi rotations until off-diagonal mass is negligible.
inline std::vector<double> symmetric_eigenvalues(Mat a) {
  const int n = static_cast<int>(a.rows());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        Mat j = Mat::Identity(n, n);
        j(p, p) = c;
        j(q, q) = c;
        j(p, q) = s;
        j(q, p) = -s;
        a = j.transpose() * a * j;
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a(i, i);
  return ev;
}

inline double min_eigenvalue(const Mat& a) {
  const auto ev = symmetric_eigenvalues(a);
  double m = ev[0];
  for (double v : ev) m = std::min(m, v);
  return m;
}

inline double min_singular_value(const Mat& a) {
  // Singular values of A are sqrt of eigenvalues of A'A (clamp tiny negatives).
  const auto ev = symmetric_eigenvalues(a.transpose() * a);
  double m = ev[0];
  for (double v : ev) m = std::min(m, v);
  return std::sqrt(std::max(0.0, m));
}

// Literal Algorithm-1 replacement: try every column, recompute min SVD,
// replace at the argmax only on strict improvement, lowest index on ties.
struct BruteStack {
  Mat Z;
  Vec targets;
  int fill = 0;

  BruteStack(int m, int p) : Z(Mat::Zero(m, p)), targets(Vec::Zero(p)) {}

  bool offer(const Vec& phi, double target) {
    const int p = static_cast<int>(Z.cols());
    if (fill < p) {
      Z.col(fill) = phi;
      targets(fill) = target;
      ++fill;
      return true;
    }
    const double s_old = min_singular_value(Z.transpose());
    double s_new = -1.0;
    int best = -1;
    for (int j = 0; j < p; ++j) {
      Mat trial = Z;
      trial.col(j) = phi;
      const double s = min_singular_value(trial.transpose());
      if (s > s_new) {
        s_new = s;
        best = j;
      }
    }
    if (s_new > s_old) {
      Z.col(best) = phi;
      targets(best) = target;
      return true;
    }
    return false;
  }
};

}  // namespace oracle
