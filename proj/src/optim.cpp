#include "fairfit/optim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace fairfit {

namespace {

std::string format_params(const Eigen::VectorXd& w) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (i > 0) os << ", ";
    os << w[i];
  }
  os << "]";
  return os.str();
}

}  // namespace

void TrainConfig::validate() const {
  if (!(step_size > 0)) throw ConfigError("TrainConfig: step_size must be > 0");
  if (max_iters < 1) throw ConfigError("TrainConfig: max_iters must be >= 1");
  if (!(grad_tol > 0)) throw ConfigError("TrainConfig: grad_tol must be > 0");
  if (!(adam_beta1 > 0 && adam_beta1 < 1))
    throw ConfigError("TrainConfig: adam_beta1 must lie in (0, 1)");
  if (!(adam_beta2 > 0 && adam_beta2 < 1))
    throw ConfigError("TrainConfig: adam_beta2 must lie in (0, 1)");
  if (!(adam_eps > 0)) throw ConfigError("TrainConfig: adam_eps must be > 0");
}

void gd_step(Eigen::Ref<Eigen::VectorXd> w,
             const Eigen::Ref<const Eigen::VectorXd>& grad, double step_size) {
  w -= step_size * grad;
}

void adam_step(AdamState& state, Eigen::Ref<Eigen::VectorXd> w,
               const Eigen::Ref<const Eigen::VectorXd>& grad,
               const TrainConfig& cfg) {
  ++state.step;
  state.m = cfg.adam_beta1 * state.m + (1.0 - cfg.adam_beta1) * grad;
  state.v = cfg.adam_beta2 * state.v +
            (1.0 - cfg.adam_beta2) * grad.cwiseProduct(grad);
  const double m_corr = 1.0 - std::pow(cfg.adam_beta1, state.step);
  const double v_corr = 1.0 - std::pow(cfg.adam_beta2, state.step);
  w.array() -= cfg.step_size * (state.m.array() / m_corr) /
               ((state.v.array() / v_corr).sqrt() + cfg.adam_eps);
}

std::pair<PolynomialModel, TrainTrace> train(
    const PolynomialModel& init, const Eigen::Ref<const Eigen::VectorXd>& xs,
    const Eigen::Ref<const Eigen::VectorXd>& y, const Mask& mask,
    const LossSpec& spec, const TrainConfig& cfg) {
  spec.validate();
  cfg.validate();
  if (xs.size() != y.size() || mask.size() != static_cast<std::size_t>(y.size()))
    throw ConfigError("train: xs, y and mask lengths differ");
  if (y.size() == 0) throw ConfigError("train: empty dataset");

  const Eigen::MatrixXd design = design_matrix(xs, init.degree());
  Eigen::VectorXd w = init.coefficients();

  const auto value = [&](const Eigen::VectorXd& params) {
    return loss_value(y, design * params, mask, spec);
  };
  const auto gradient = [&](const Eigen::VectorXd& params) -> Eigen::VectorXd {
    return design.transpose() *
           loss_grad_predictions(y, design * params, mask, spec);
  };

  TrainTrace trace;
  const double initial_loss = value(w);
  if (!std::isfinite(initial_loss))
    throw NumericError("train: non-finite loss at iteration 0 with parameters " +
                       format_params(w));
  trace.loss.push_back(initial_loss);

  Eigen::VectorXd best_w = w;
  double best_loss = initial_loss;
  AdamState adam(w.size());

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const Eigen::VectorXd grad = gradient(w);
    if (!grad.allFinite())
      throw NumericError("train: non-finite gradient at iteration " +
                         std::to_string(iter) + " with parameters " +
                         format_params(w));
    if (grad.lpNorm<Eigen::Infinity>() < cfg.grad_tol) {
      trace.converged = true;
      break;
    }
    if (cfg.optimizer == Optimizer::Gd)
      gd_step(w, grad, cfg.step_size);
    else
      adam_step(adam, w, grad, cfg);

    const double loss = value(w);
    if (!std::isfinite(loss))
      throw NumericError("train: non-finite loss at iteration " +
                         std::to_string(iter) + " with parameters " +
                         format_params(w));
    trace.loss.push_back(loss);
    trace.iterations_used = iter;
    if (loss < best_loss) {
      best_loss = loss;
      best_w = w;
    }
  }

  trace.final_grad_norm = gradient(best_w).lpNorm<Eigen::Infinity>();
  return {PolynomialModel(std::move(best_w)), std::move(trace)};
}

std::pair<PolynomialModel, TrainTrace> unlearn(
    const PolynomialModel& trained, const Eigen::Ref<const Eigen::VectorXd>& xs,
    const Eigen::Ref<const Eigen::VectorXd>& y, const Mask& mask, double sigma,
    const TrainConfig& cfg) {
  if (std::find(mask.begin(), mask.end(), Label::Wanted) == mask.end())
    throw ConfigError(
        "unlearn: mask marks every sample unwanted; at least one wanted "
        "sample is required");
  return train(trained, xs, y, mask, LossSpec::emse(sigma), cfg);
}

}  // namespace fairfit
