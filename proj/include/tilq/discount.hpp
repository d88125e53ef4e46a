#pragma once

namespace tilq {

// Discount weights: plain exponential e^{-rho t}, or a present-biased
// mixture lambda e^{-rho t} + (1-lambda) e^{-gamma t} with gamma > rho > 0
// and lambda in (0,1). The mixture discounts the near future at a rate
// close to rho + (1-lambda)(gamma-rho) and the far future at rho.
enum class DiscountKind { exponential, mixture };

struct DiscountSpec {
  DiscountKind kind = DiscountKind::exponential;
  double rho = 0.15;
  double lambda = 1.0;  // weight on the rho component (mixture only)
  double gamma = 0.0;   // short-run rate (mixture only)

  // Validating factories. Throw std::invalid_argument on bad parameters.
  // lambda = 0 and lambda = 1 are rejected; use the exponential kind for
  // the degenerate case.
  static DiscountSpec exponential(double rho);
  static DiscountSpec mixture(double lambda, double rho, double gamma);

  void validate() const;
};

// Discount weight at horizon t >= 0. alpha(0) = 1, strictly decreasing.
double alpha(const DiscountSpec& spec, double t);

// d alpha / dt. Negative for every t >= 0.
double alpha_derivative(const DiscountSpec& spec, double t);

// Instantaneous rate -alpha'(t)/alpha(t). Constant for the exponential
// kind; for mixtures it declines monotonically from short_rate() to rho.
double implied_rate(const DiscountSpec& spec, double t);

// implied_rate at t = 0: rho for exponentials, rho + (1-lambda)(gamma-rho)
// for mixtures.
double short_rate(const DiscountSpec& spec);

}  // namespace tilq
