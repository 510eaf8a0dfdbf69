#include "fairfit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace fairfit {

namespace {

// L1 distance between the empirical CDFs of two sorted samples.
double wasserstein1(const std::vector<double>& a, const std::vector<double>& b) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double acc = 0.0;
  double last = std::min(a.front(), b.front());
  while (i < a.size() || j < b.size()) {
    double t;
    if (i == a.size())
      t = b[j];
    else if (j == b.size())
      t = a[i];
    else
      t = std::min(a[i], b[j]);
    acc += std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb) *
           (t - last);
    while (i < a.size() && a[i] == t) ++i;
    while (j < b.size() && b[j] == t) ++j;
    last = t;
  }
  return acc;
}

double subset_r_squared(const char* name, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& yhat) {
  try {
    return r_squared(y, yhat);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(name) + " subset: " + e.what());
  }
}

}  // namespace

double r_squared(const Eigen::Ref<const Eigen::VectorXd>& y,
                 const Eigen::Ref<const Eigen::VectorXd>& yhat) {
  if (y.size() != yhat.size())
    throw ConfigError("r_squared: y and yhat lengths differ");
  if (y.size() < 2) throw ConfigError("r_squared: need at least 2 samples");
  const double mean = y.mean();
  const double tss = (y.array() - mean).square().sum();
  if (tss == 0.0)
    throw ConfigError("r_squared: degenerate subset (all targets equal)");
  const double rss = (y - yhat).squaredNorm();
  return 1.0 - rss / tss;
}

double exponential_r_squared(double r2) {
  if (!(r2 <= 1.0))
    throw ConfigError(
        "exponential_r_squared: R^2 cannot exceed 1 under the RSS/TSS "
        "definition");
  const double value = -std::expm1(-(1.0 - r2));
  // exp(-(1-r2)) underflows for strongly negative r2; keep the value inside
  // [0, 1) so downstream range checks stay valid
  return std::min(value, std::nextafter(1.0, 0.0));
}

double fair_r_squared(double exp_r2_wanted, double exp_r2_unwanted) {
  if (!(exp_r2_wanted >= 0.0 && exp_r2_wanted < 1.0))
    throw ConfigError("fair_r_squared: exp_r2_wanted outside [0, 1)");
  if (!(exp_r2_unwanted >= 0.0 && exp_r2_unwanted < 1.0))
    throw ConfigError("fair_r_squared: exp_r2_unwanted outside [0, 1)");
  return (1.0 - exp_r2_wanted) * exp_r2_unwanted;
}

double overlap_diagnostic(const Eigen::Ref<const Eigen::VectorXd>& xs,
                          const Mask& mask) {
  if (mask.size() != static_cast<std::size_t>(xs.size()))
    throw ConfigError("overlap_diagnostic: xs and mask lengths differ");
  std::vector<double> wanted, unwanted;
  for (Eigen::Index i = 0; i < xs.size(); ++i)
    (mask[i] == Label::Wanted ? wanted : unwanted).push_back(xs[i]);
  if (wanted.empty() || unwanted.empty())
    throw ConfigError("overlap_diagnostic: both subsets must be non-empty");

  // min-max normalise the pooled sample to [0, 1]
  const double lo = xs.minCoeff();
  const double hi = xs.maxCoeff();
  if (hi == lo) return 1.0;  // single support point: identical distributions
  const double range = hi - lo;
  for (double& v : wanted) v = (v - lo) / range;
  for (double& v : unwanted) v = (v - lo) / range;
  std::sort(wanted.begin(), wanted.end());
  std::sort(unwanted.begin(), unwanted.end());

  const double distance = wasserstein1(wanted, unwanted);
  if (distance == 0.0) return 1.0;

  // normalise by the pooled standard deviation so that a compact cluster far
  // from the wanted mass registers as separated, not overlapping
  double mean = 0.0;
  for (Eigen::Index i = 0; i < xs.size(); ++i) mean += (xs[i] - lo) / range;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    const double d = (xs[i] - lo) / range - mean;
    var += d * d;
  }
  const double spread = std::sqrt(var / static_cast<double>(xs.size()));
  return 1.0 - std::min(1.0, distance / spread);
}

MetricsReport evaluate(const PolynomialModel& model,
                       const Eigen::Ref<const Eigen::VectorXd>& xs,
                       const Eigen::Ref<const Eigen::VectorXd>& y,
                       const Mask& mask) {
  if (xs.size() != y.size() || mask.size() != static_cast<std::size_t>(y.size()))
    throw ConfigError("evaluate: xs, y and mask lengths differ");
  const Eigen::VectorXd yhat = predict(model, xs);

  std::vector<Eigen::Index> wanted_idx, unwanted_idx;
  for (Eigen::Index i = 0; i < xs.size(); ++i)
    (mask[i] == Label::Wanted ? wanted_idx : unwanted_idx).push_back(i);
  if (wanted_idx.size() < 2)
    throw ConfigError("evaluate: wanted subset needs at least 2 samples");
  if (unwanted_idx.size() < 2)
    throw ConfigError("evaluate: unwanted subset needs at least 2 samples");

  const auto gather = [](const Eigen::VectorXd& v,
                         const std::vector<Eigen::Index>& idx) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k)
      out[static_cast<Eigen::Index>(k)] = v[idx[k]];
    return out;
  };

  MetricsReport report;
  report.n_wanted = static_cast<Eigen::Index>(wanted_idx.size());
  report.n_unwanted = static_cast<Eigen::Index>(unwanted_idx.size());
  report.r2_wanted =
      subset_r_squared("wanted", gather(y, wanted_idx), gather(yhat, wanted_idx));
  report.r2_unwanted = subset_r_squared("unwanted", gather(y, unwanted_idx),
                                        gather(yhat, unwanted_idx));
  report.exp_r2_wanted = exponential_r_squared(report.r2_wanted);
  report.exp_r2_unwanted = exponential_r_squared(report.r2_unwanted);
  report.fair_r2 = fair_r_squared(report.exp_r2_wanted, report.exp_r2_unwanted);
  report.overlap_score = overlap_diagnostic(xs, mask);
  return report;
}

}  // namespace fairfit
