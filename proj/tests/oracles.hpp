// Test-only reference implementations, kept independent of the library code
// paths they are used to check.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fairfit/loss.hpp"
#include "fairfit/model.hpp"

namespace oracles {

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// Central finite differences of the loss with respect to the coefficients.
// The loss is evaluated through predict() (Horner), sharing nothing with the
// design-matrix chain rule inside loss_grad_params.
inline Eigen::VectorXd fd_loss_grad(const fairfit::PolynomialModel& model,
                                    const Eigen::VectorXd& xs,
                                    const Eigen::VectorXd& y,
                                    const fairfit::Mask& mask,
                                    const fairfit::LossSpec& spec,
                                    double h = 1e-6) {
  const Eigen::VectorXd& w0 = model.coefficients();
  Eigen::VectorXd grad(w0.size());
  for (Eigen::Index k = 0; k < w0.size(); ++k) {
    Eigen::VectorXd wp = w0;
    Eigen::VectorXd wm = w0;
    wp[k] += h;
    wm[k] -= h;
    const double fp = fairfit::loss_value(
        y, fairfit::predict(fairfit::PolynomialModel(wp), xs), mask, spec);
    const double fm = fairfit::loss_value(
        y, fairfit::predict(fairfit::PolynomialModel(wm), xs), mask, spec);
    grad[k] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

// Closed-form least squares through an independently built (pow-based)
// Vandermonde matrix.
inline Eigen::VectorXd least_squares_fit(const Eigen::VectorXd& xs,
                                         const Eigen::VectorXd& y,
                                         Eigen::Index degree) {
  Eigen::MatrixXd v(xs.size(), degree + 1);
  for (Eigen::Index i = 0; i < xs.size(); ++i)
    for (Eigen::Index k = 0; k <= degree; ++k)
      v(i, k) = std::pow(xs[i], static_cast<double>(k));
  return v.colPivHouseholderQr().solve(y);
}

struct GridMinimum {
  Eigen::VectorXd coefficients;
  double loss = std::numeric_limits<double>::infinity();
};

// Exhaustive EMSE evaluation over the coefficient box [lo, hi]^(degree+1).
inline GridMinimum grid_min_emse(const Eigen::VectorXd& xs,
                                 const Eigen::VectorXd& y,
                                 const fairfit::Mask& mask, double sigma,
                                 Eigen::Index degree, double lo = -5.0,
                                 double hi = 5.0, double step = 0.01) {
  if (degree > 1)
    throw std::invalid_argument("grid oracle only supports degree <= 1");
  const int n_vals = static_cast<int>(std::lround((hi - lo) / step)) + 1;
  Eigen::VectorXd yhat(xs.size());
  GridMinimum best;
  best.coefficients = Eigen::VectorXd::Zero(degree + 1);
  if (degree == 0) {
    for (int i = 0; i < n_vals; ++i) {
      const double a = lo + i * step;
      yhat.setConstant(a);
      const double value = fairfit::emse(y, yhat, mask, sigma);
      if (value < best.loss) {
        best.loss = value;
        best.coefficients[0] = a;
      }
    }
    return best;
  }
  for (int i = 0; i < n_vals; ++i) {
    const double a = lo + i * step;
    for (int j = 0; j < n_vals; ++j) {
      const double b = lo + j * step;
      for (Eigen::Index s = 0; s < xs.size(); ++s) yhat[s] = a + b * xs[s];
      const double value = fairfit::emse(y, yhat, mask, sigma);
      if (value < best.loss) {
        best.loss = value;
        best.coefficients[0] = a;
        best.coefficients[1] = b;
      }
    }
  }
  return best;
}

}  // namespace oracles
