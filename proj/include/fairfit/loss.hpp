#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "fairfit/common.hpp"
#include "fairfit/model.hpp"

namespace fairfit {

enum class LossKind { Mse, Emse };

// EMSE sums r^2/(2 sigma^2) over wanted samples and
// -log(1 - exp(-r^2/(2 sigma^2)) / (sqrt(2 pi) sigma)) over unwanted ones.
// The log argument stays inside (0, 1) iff sigma > 1/sqrt(2 pi); at
// sigma = 1/sqrt(2) the wanted part reduces to plain summed squared error.
struct LossSpec {
  LossKind kind = LossKind::Mse;
  double sigma = kDefaultSigma;

  static LossSpec mse() { return {LossKind::Mse, kDefaultSigma}; }
  static LossSpec emse(double sigma = kDefaultSigma) {
    return {LossKind::Emse, sigma};
  }

  static void check_sigma(double sigma) {
    if (!(sigma > kInvSqrt2Pi))
      throw ConfigError(
          "EMSE requires sigma > 1/sqrt(2*pi) ~= 0.398942: the log argument "
          "1 - exp(-r^2/(2 sigma^2))/(sqrt(2*pi) sigma) must stay positive, "
          "got sigma = " +
          std::to_string(sigma));
  }

  void validate() const {
    if (kind == LossKind::Emse) check_sigma(sigma);
  }
};

// Residuals y - yhat paired with their wanted/unwanted labels.
struct MaskedResiduals {
  Eigen::VectorXd residuals;
  Mask mask;
};

inline MaskedResiduals masked_residuals(
    const Eigen::Ref<const Eigen::VectorXd>& y,
    const Eigen::Ref<const Eigen::VectorXd>& yhat, const Mask& mask) {
  if (y.size() != yhat.size() ||
      mask.size() != static_cast<std::size_t>(y.size()))
    throw ConfigError("masked_residuals: y, yhat and mask lengths differ");
  return {y - yhat, mask};
}

// Sum (not mean) of squared residuals, accumulated in dataset order.
template <typename DerivedY, typename DerivedP>
typename DerivedY::Scalar mse(const Eigen::MatrixBase<DerivedY>& y,
                              const Eigen::MatrixBase<DerivedP>& yhat) {
  using Scalar = typename DerivedY::Scalar;
  if (y.size() != yhat.size())
    throw ConfigError("mse: y and yhat lengths differ (" +
                      std::to_string(y.size()) + " vs " +
                      std::to_string(yhat.size()) + ")");
  if (y.size() == 0) throw ConfigError("mse: empty dataset");
  Scalar acc{0};
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const Scalar r = y(i) - yhat(i);
    acc += r * r;
  }
  return acc;
}

// One unwanted-sample penalty: positive, symmetric in r, maximal at r = 0 and
// vanishing as |r| grows.
template <typename Scalar>
Scalar unwanted_term(Scalar r, Scalar sigma) {
  LossSpec::check_sigma(static_cast<double>(sigma));
  const Scalar scale = Scalar(kDefaultSigma) / sigma;  // 1/(sqrt(2) sigma)
  const Scalar u = r * scale;
  const Scalar p = (Scalar(kInvSqrt2Pi) / sigma) * std::exp(-u * u);
  return -std::log1p(-p);
}

// Wanted terms scale residuals by 1/(sqrt(2) sigma) before squaring; for the
// default sigma that factor is exactly 1.0, so an all-wanted mask reproduces
// mse() bit for bit under the shared dataset-order accumulation.
inline double emse(const MaskedResiduals& mr, double sigma = kDefaultSigma) {
  if (mr.residuals.size() == 0) throw ConfigError("emse: empty dataset");
  if (mr.mask.size() != static_cast<std::size_t>(mr.residuals.size()))
    throw ConfigError("emse: residuals and mask lengths differ");
  LossSpec::check_sigma(sigma);
  const double scale = kDefaultSigma / sigma;
  const double c = kInvSqrt2Pi / sigma;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < mr.residuals.size(); ++i) {
    const double u = mr.residuals[i] * scale;
    if (mr.mask[i] == Label::Wanted)
      acc += u * u;
    else
      acc += -std::log1p(-c * std::exp(-u * u));
  }
  return acc;
}

inline double emse(const Eigen::Ref<const Eigen::VectorXd>& y,
                   const Eigen::Ref<const Eigen::VectorXd>& yhat,
                   const Mask& mask, double sigma = kDefaultSigma) {
  return emse(masked_residuals(y, yhat, mask), sigma);
}

inline double loss_value(const Eigen::Ref<const Eigen::VectorXd>& y,
                         const Eigen::Ref<const Eigen::VectorXd>& yhat,
                         const Mask& mask, const LossSpec& spec) {
  spec.validate();
  return spec.kind == LossKind::Mse ? mse(y, yhat)
                                    : emse(y, yhat, mask, spec.sigma);
}

// d(loss)/d(yhat), one entry per sample. MSE contributes -2r everywhere
// (the mask only partitions EMSE); EMSE wanted samples give -r/sigma^2 and
// unwanted ones (r/sigma^2) * p/(1-p) with p = exp(-r^2/(2 sigma^2))
// / (sqrt(2 pi) sigma). p/(1-p) reuses the validated log argument 1-p.
inline Eigen::VectorXd loss_grad_predictions(
    const Eigen::Ref<const Eigen::VectorXd>& y,
    const Eigen::Ref<const Eigen::VectorXd>& yhat, const Mask& mask,
    const LossSpec& spec) {
  spec.validate();
  if (y.size() != yhat.size() ||
      mask.size() != static_cast<std::size_t>(y.size()))
    throw ConfigError("loss_grad_predictions: y, yhat and mask lengths differ");
  if (y.size() == 0) throw ConfigError("loss_grad_predictions: empty dataset");
  Eigen::VectorXd g(y.size());
  if (spec.kind == LossKind::Mse) {
    g = -2.0 * (y - yhat);
    return g;
  }
  const double scale = kDefaultSigma / spec.sigma;
  const double c = kInvSqrt2Pi / spec.sigma;
  const double inv_sigma_sq = 2.0 * scale * scale;  // 1/sigma^2
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double r = y[i] - yhat[i];
    if (mask[i] == Label::Wanted) {
      g[i] = -inv_sigma_sq * r;
    } else {
      const double u = r * scale;
      const double p = c * std::exp(-u * u);
      g[i] = inv_sigma_sq * r * (p / (1.0 - p));
    }
  }
  return g;
}

// Exact gradient of the selected loss with respect to the coefficients, via
// the chain rule through the design matrix.
inline Eigen::VectorXd loss_grad_params(
    const PolynomialModel& model, const Eigen::Ref<const Eigen::VectorXd>& xs,
    const Eigen::Ref<const Eigen::VectorXd>& y, const Mask& mask,
    const LossSpec& spec) {
  const Eigen::MatrixXd design = design_matrix(xs, model.degree());
  const Eigen::VectorXd yhat = design * model.coefficients();
  return design.transpose() * loss_grad_predictions(y, yhat, mask, spec);
}

}  // namespace fairfit
