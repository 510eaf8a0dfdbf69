#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>

#include "fairfit/common.hpp"
#include "fairfit/random.hpp"

namespace fairfit {

// Polynomial in the monomial basis; coefficients()[k] multiplies x^k, so the
// degree is always coefficients().size() - 1.
class PolynomialModel {
 public:
  PolynomialModel() : coefficients_(Eigen::VectorXd::Zero(1)) {}

  explicit PolynomialModel(Eigen::VectorXd coefficients)
      : coefficients_(std::move(coefficients)) {
    if (coefficients_.size() == 0)
      throw ConfigError("PolynomialModel: coefficient vector must not be empty");
    if (!coefficients_.allFinite())
      throw ConfigError("PolynomialModel: coefficients must be finite");
  }

  Eigen::Index degree() const { return coefficients_.size() - 1; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }

 private:
  Eigen::VectorXd coefficients_;
};

// Vandermonde expansion: entry (i, k) is xs[i]^k, column 0 is all ones.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
design_matrix(const Eigen::MatrixBase<Derived>& xs, Eigen::Index degree) {
  using Scalar = typename Derived::Scalar;
  static_assert(Derived::ColsAtCompileTime == 1 ||
                    Derived::ColsAtCompileTime == Eigen::Dynamic,
                "design_matrix expects a column vector");
  if (degree < 0) throw ConfigError("design_matrix: degree must be >= 0");
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x = xs;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]))
      throw NumericError("design_matrix: non-finite input at index " +
                         std::to_string(i));
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(x.size(), degree + 1);
  out.col(0).setOnes();
  for (Eigen::Index k = 1; k <= degree; ++k)
    out.col(k) = out.col(k - 1).cwiseProduct(x);
  return out;
}

// Evaluates the model at every xs[i] with Horner's scheme.
inline Eigen::VectorXd predict(const PolynomialModel& model,
                               const Eigen::Ref<const Eigen::VectorXd>& xs) {
  const Eigen::VectorXd& c = model.coefficients();
  Eigen::VectorXd out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    double acc = c[c.size() - 1];
    for (Eigen::Index k = c.size() - 2; k >= 0; --k) acc = acc * xs[i] + c[k];
    if (!std::isfinite(acc))
      throw NumericError("predict: non-finite value at sample " +
                         std::to_string(i));
    out[i] = acc;
  }
  return out;
}

enum class InitMode { Zeros, Uniform };

// Deterministic for a fixed (mode, seed); half_range bounds the uniform draw.
inline PolynomialModel init_model(Eigen::Index degree, InitMode mode,
                                  std::uint64_t seed, double half_range = 0.5) {
  if (degree < 0) throw ConfigError("init_model: degree must be >= 0");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(degree + 1);
  if (mode == InitMode::Uniform) {
    if (!(half_range > 0))
      throw ConfigError("init_model: half_range must be > 0");
    Rng rng(seed);
    for (Eigen::Index k = 0; k < c.size(); ++k)
      c[k] = rng.uniform(-half_range, half_range);
  }
  return PolynomialModel(std::move(c));
}

}  // namespace fairfit
