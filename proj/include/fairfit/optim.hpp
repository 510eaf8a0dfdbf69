#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "fairfit/loss.hpp"
#include "fairfit/model.hpp"

namespace fairfit {

enum class Optimizer { Gd, Adam };

struct TrainConfig {
  Optimizer optimizer = Optimizer::Adam;
  double step_size = 0.01;
  int max_iters = 20000;
  double grad_tol = 1e-8;  // stop once the gradient infinity-norm drops below
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;  // consumed by random inits upstream; echoed for provenance

  void validate() const;
};

struct TrainTrace {
  std::vector<double> loss;       // loss[0] is the starting value, then one entry per step
  double final_grad_norm = 0.0;   // infinity norm at the returned parameters
  int iterations_used = 0;
  bool converged = false;
};

// w <- w - step_size * grad
void gd_step(Eigen::Ref<Eigen::VectorXd> w,
             const Eigen::Ref<const Eigen::VectorXd>& grad, double step_size);

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long step = 0;

  explicit AdamState(Eigen::Index n)
      : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}
};

// Standard bias-corrected first/second-moment update.
void adam_step(AdamState& state, Eigen::Ref<Eigen::VectorXd> w,
               const Eigen::Ref<const Eigen::VectorXd>& grad,
               const TrainConfig& cfg);

// Full-batch minimisation of the configured loss starting from `init`.
// Deterministic for fixed inputs. Returns the best iterate seen, so the
// result never scores worse than the starting point.
std::pair<PolynomialModel, TrainTrace> train(
    const PolynomialModel& init, const Eigen::Ref<const Eigen::VectorXd>& xs,
    const Eigen::Ref<const Eigen::VectorXd>& y, const Mask& mask,
    const LossSpec& spec, const TrainConfig& cfg);

// Warm-started EMSE re-fit of an already trained model: identical to
// train(trained, ..., LossSpec::emse(sigma), cfg). Requires at least one
// wanted sample.
std::pair<PolynomialModel, TrainTrace> unlearn(
    const PolynomialModel& trained, const Eigen::Ref<const Eigen::VectorXd>& xs,
    const Eigen::Ref<const Eigen::VectorXd>& y, const Mask& mask, double sigma,
    const TrainConfig& cfg);

}  // namespace fairfit
