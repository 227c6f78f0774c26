#pragma once

#include <functional>

#include "claeo/types.hpp"

namespace claeo {

/// Value-function approximation basis psi: R^n -> R^r with analytic gradient.
struct Basis {
  int r = 0;
  std::function<Vec(const Vec&)> psi;       // psi(x) in R^r
  std::function<Mat(const Vec&)> psi_grad;  // psi_x(x) in R^{r x n}
};

/// psi(x) = [x1^2, x1 x2, x2^2], the exact basis for quadratic value functions
/// on a two-dimensional plant.
inline Basis make_quadratic_basis_2d() {
  Basis b;
  b.r = 3;
  b.psi = [](const Vec& x) {
    Vec p(3);
    p << x(0) * x(0), x(0) * x(1), x(1) * x(1);
    return p;
  };
  b.psi_grad = [](const Vec& x) {
    Mat g(3, 2);
    g << 2.0 * x(0), 0.0,
         x(1), x(0),
         0.0, 2.0 * x(1);
    return g;
  };
  return b;
}

}  // namespace claeo
