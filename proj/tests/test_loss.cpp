#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fairfit/loss.hpp"
#include "fairfit/random.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using fairfit::ConfigError;
using fairfit::kDefaultSigma;
using fairfit::kInvSqrt2Pi;
using fairfit::Label;
using fairfit::LossSpec;
using fairfit::Mask;
using fairfit::PolynomialModel;

using testutil::bits_equal;
using testutil::vec;

namespace {

// closed-form values, frozen from high-precision evaluation of
// -log(1 - exp(-r^2) / sqrt(pi)) at sigma = 1/sqrt(2)
constexpr double kTermAtZero = 0.83054795484757178;
constexpr double kTermAtOne = 0.23263059724716151;

}  // namespace

TEST_CASE("mse sums squared residuals") {
  CHECK(fairfit::mse(vec({1, 2}), vec({1, 2})) == 0.0);
  CHECK(fairfit::mse(vec({0}), vec({1})) == 1.0);
  CHECK(fairfit::mse(vec({1, 3}), vec({2, 1})) == 5.0);
  CHECK_THROWS_AS(fairfit::mse(vec({1, 2}), vec({1})), ConfigError);
  CHECK_THROWS_AS(fairfit::mse(Eigen::VectorXd(), Eigen::VectorXd()),
                  ConfigError);
}

TEST_CASE("unwanted_term matches its closed form") {
  CHECK(fairfit::unwanted_term(0.0, kDefaultSigma) ==
        doctest::Approx(kTermAtZero).epsilon(1e-14));
  CHECK(fairfit::unwanted_term(1.0, kDefaultSigma) ==
        doctest::Approx(kTermAtOne).epsilon(1e-14));
  // the exponential underflows long before r reaches 1e8
  CHECK(fairfit::unwanted_term(1e8, kDefaultSigma) == 0.0);
  CHECK(fairfit::unwanted_term(-1e8, 1.5) == 0.0);
}

TEST_CASE("unwanted_term rejects sigma at or below 1/sqrt(2*pi)") {
  CHECK_THROWS_AS(fairfit::unwanted_term(1.0, 0.39), ConfigError);
  CHECK_THROWS_AS(fairfit::unwanted_term(1.0, kInvSqrt2Pi), ConfigError);
  CHECK_THROWS_AS(LossSpec::emse(0.39).validate(), ConfigError);
  CHECK_NOTHROW(LossSpec::emse(kInvSqrt2Pi + 1e-6).validate());
  CHECK_NOTHROW(LossSpec::mse().validate());
}

TEST_CASE("emse reduces to mse for an all-wanted mask at the default sigma") {
  fairfit::Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform(0, 30));
    Eigen::VectorXd y(n), yhat(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      y[i] = rng.uniform(-5, 5);
      yhat[i] = rng.uniform(-5, 5);
    }
    const Mask mask(static_cast<std::size_t>(n), Label::Wanted);
    // bit-for-bit: both accumulate r*r in dataset order
    CHECK(fairfit::emse(y, yhat, mask, kDefaultSigma) == fairfit::mse(y, yhat));
  }
}

TEST_CASE("emse composes wanted and unwanted contributions") {
  const Mask both_unwanted{Label::Unwanted, Label::Unwanted};
  CHECK(fairfit::emse(vec({1, 2}), vec({1, 2}), both_unwanted, kDefaultSigma) ==
        doctest::Approx(2 * kTermAtZero).epsilon(1e-14));

  const Mask mixed{Label::Wanted, Label::Unwanted};
  CHECK(fairfit::emse(vec({1, 2}), vec({1, 1}), mixed, kDefaultSigma) ==
        doctest::Approx(kTermAtOne).epsilon(1e-14));

  CHECK_THROWS_AS(fairfit::emse(Eigen::VectorXd(), Eigen::VectorXd(), Mask{}),
                  ConfigError);
  CHECK_THROWS_AS(fairfit::emse(vec({1}), vec({1}), Mask{}), ConfigError);
}

TEST_CASE("unwanted_term domain safety, bound, symmetry and monotonicity") {
  fairfit::Rng rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const double sigma = rng.uniform(kInvSqrt2Pi + 1e-6, 10.0);
    const double r1 = rng.uniform(-100, 100);
    const double r2 = rng.uniform(-100, 100);
    const double t1 = fairfit::unwanted_term(r1, sigma);
    const double t2 = fairfit::unwanted_term(r2, sigma);
    CHECK(std::isfinite(t1));
    // strictly positive mathematically; +0.0 once exp(-r^2/..) underflows
    CHECK(t1 >= 0.0);
    CHECK(t1 <= fairfit::unwanted_term(0.0, sigma));
    CHECK(fairfit::unwanted_term(-r1, sigma) == t1);
    if (std::abs(r1) < std::abs(r2)) {
      CHECK(t1 >= t2);
      if (t1 > 0.0 && std::abs(r2) - std::abs(r1) > 1e-6) CHECK(t1 > t2);
    }
  }
  // positivity away from the underflow region
  for (double r : {0.0, 0.5, 1.0, 3.0, 10.0})
    CHECK(fairfit::unwanted_term(r, kDefaultSigma) > 0.0);
}

TEST_CASE("emse is invariant under simultaneous permutation") {
  fairfit::Rng rng(31337);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform(0, 30));
    Eigen::VectorXd y(n), yhat(n);
    Mask mask(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      y[i] = rng.uniform(-5, 5);
      yhat[i] = rng.uniform(-5, 5);
      mask[static_cast<std::size_t>(i)] =
          rng.uniform() < 0.5 ? Label::Wanted : Label::Unwanted;
    }
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t k = perm.size(); k > 1; --k)
      std::swap(perm[k - 1],
                perm[static_cast<std::size_t>(rng.uniform(0, static_cast<double>(k)))]);

    Eigen::VectorXd py(n), pyhat(n);
    Mask pmask(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      py[i] = y[perm[static_cast<std::size_t>(i)]];
      pyhat[i] = yhat[perm[static_cast<std::size_t>(i)]];
      pmask[static_cast<std::size_t>(i)] =
          mask[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    }
    const double base = fairfit::emse(y, yhat, mask, 0.8);
    const double permuted = fairfit::emse(py, pyhat, pmask, 0.8);
    CHECK(oracles::relative_error(base, permuted) < 1e-12);
  }
}

TEST_CASE("loss_grad_params matches central finite differences") {
  fairfit::Rng rng(424242);
  const double sigmas[] = {kDefaultSigma, 0.6, 1.5};
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const Eigen::Index degree = static_cast<Eigen::Index>(rng.uniform(0, 6));
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform(0, 50));
    Eigen::VectorXd w(degree + 1), xs(n), y(n);
    for (Eigen::Index k = 0; k <= degree; ++k) w[k] = rng.uniform(-1, 1);
    Mask mask(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      xs[i] = rng.uniform(-1, 1);
      y[i] = rng.uniform(-3, 3);
      mask[static_cast<std::size_t>(i)] =
          rng.uniform() < 0.5 ? Label::Wanted : Label::Unwanted;
    }
    const LossSpec spec = (trial % 2 == 0)
                              ? LossSpec::mse()
                              : LossSpec::emse(sigmas[trial % 3]);
    const PolynomialModel model(w);
    const Eigen::VectorXd analytic =
        fairfit::loss_grad_params(model, xs, y, mask, spec);
    const Eigen::VectorXd numeric = oracles::fd_loss_grad(model, xs, y, mask, spec);
    for (Eigen::Index k = 0; k <= degree; ++k) {
      CHECK(oracles::relative_error(analytic[k], numeric[k]) < 1e-6);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("gradient hand checks") {
  // perfect fit, all wanted: stationary point of MSE
  const Eigen::VectorXd xs = vec({-1, 0, 2});
  const Eigen::VectorXd y = vec({1, 1, 7});
  const PolynomialModel fit(vec({1, 1, 1}));  // 1 + x + x^2 hits all three
  const Mask wanted(3, Label::Wanted);
  CHECK(bits_equal(fairfit::loss_grad_params(fit, xs, y, wanted, LossSpec::mse()),
                   vec({0, 0, 0})));

  // zero model, one wanted sample at (1, 1): d(r^2)/dw = [-2, -2]
  const PolynomialModel zero(vec({0, 0}));
  const Mask one(1, Label::Wanted);
  CHECK(bits_equal(fairfit::loss_grad_params(zero, vec({1}), vec({1}), one,
                                              LossSpec::emse(kDefaultSigma)),
                   vec({-2, -2})));
  CHECK(bits_equal(fairfit::loss_grad_params(zero, vec({1}), vec({1}), one,
                                              LossSpec::mse()),
                   vec({-2, -2})));
}
