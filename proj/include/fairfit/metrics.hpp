#pragma once

#include <Eigen/Dense>

#include "fairfit/common.hpp"
#include "fairfit/model.hpp"

namespace fairfit {

struct MetricsReport {
  double r2_wanted = 0.0;
  double r2_unwanted = 0.0;
  double exp_r2_wanted = 0.0;    // in [0, 1)
  double exp_r2_unwanted = 0.0;  // in [0, 1)
  double fair_r2 = 0.0;          // (1 - exp_r2_wanted) * exp_r2_unwanted
  Eigen::Index n_wanted = 0;
  Eigen::Index n_unwanted = 0;
  double overlap_score = 0.0;  // in [0, 1]; near 1 means heavy x-overlap
};

// 1 - RSS/TSS with the subset's own mean; negative when the model does worse
// than that mean. Needs at least two samples and a non-degenerate TSS.
double r_squared(const Eigen::Ref<const Eigen::VectorXd>& y,
                 const Eigen::Ref<const Eigen::VectorXd>& yhat);

// 1 - exp(-(1 - r2)): a bounded unrepresentativeness score, strictly
// decreasing in r2, with range [0, 1) over r2 <= 1.
double exponential_r_squared(double r2);

// (1 - exp_r2_wanted) * exp_r2_unwanted; both inputs must lie in [0, 1).
double fair_r_squared(double exp_r2_wanted, double exp_r2_unwanted);

// Symmetric overlap score of the wanted vs unwanted x-distributions:
// 1 minus the normalised 1-D Wasserstein distance between the two empirical
// samples, clipped to [0, 1]. 0 means well-separated supports, values near 1
// mean the subsets are interleaved.
double overlap_diagnostic(const Eigen::Ref<const Eigen::VectorXd>& xs,
                          const Mask& mask);

// Computes subset predictions once and fills every field consistently with
// the formulas above. Each subset needs >= 2 samples and non-degenerate TSS.
MetricsReport evaluate(const PolynomialModel& model,
                       const Eigen::Ref<const Eigen::VectorXd>& xs,
                       const Eigen::Ref<const Eigen::VectorXd>& y,
                       const Mask& mask);

}  // namespace fairfit
