#include "tilq/discount.hpp"

#include <cmath>
#include <stdexcept>

namespace tilq {

DiscountSpec DiscountSpec::exponential(double rho) {
  DiscountSpec spec{DiscountKind::exponential, rho, 1.0, 0.0};
  spec.validate();
  return spec;
}

DiscountSpec DiscountSpec::mixture(double lambda, double rho, double gamma) {
  DiscountSpec spec{DiscountKind::mixture, rho, lambda, gamma};
  spec.validate();
  return spec;
}

void DiscountSpec::validate() const {
  if (!(rho > 0.0)) throw std::invalid_argument("discount: rho must be positive");
  if (kind == DiscountKind::mixture) {
    if (!(gamma > rho)) throw std::invalid_argument("discount: mixture requires gamma > rho");
    if (!(lambda > 0.0 && lambda < 1.0))
      throw std::invalid_argument("discount: mixture requires lambda in (0,1)");
  }
}

namespace {
void require_nonnegative_time(double t) {
  if (!(t >= 0.0)) throw std::domain_error("discount: t must be nonnegative");
}
}  // namespace

double alpha(const DiscountSpec& spec, double t) {
  require_nonnegative_time(t);
  if (spec.kind == DiscountKind::exponential) return std::exp(-spec.rho * t);
  return spec.lambda * std::exp(-spec.rho * t) + (1.0 - spec.lambda) * std::exp(-spec.gamma * t);
}

double alpha_derivative(const DiscountSpec& spec, double t) {
  require_nonnegative_time(t);
  if (spec.kind == DiscountKind::exponential) return -spec.rho * std::exp(-spec.rho * t);
  return -spec.lambda * spec.rho * std::exp(-spec.rho * t) -
         (1.0 - spec.lambda) * spec.gamma * std::exp(-spec.gamma * t);
}

double implied_rate(const DiscountSpec& spec, double t) {
  require_nonnegative_time(t);
  if (spec.kind == DiscountKind::exponential) return spec.rho;
  // rho + (1-lambda)(gamma-rho) / (lambda e^{(gamma-rho) t} + 1 - lambda);
  // this form stays finite for large t, unlike -alpha'/alpha evaluated
  // directly once both exponentials underflow.
  const double w = spec.lambda * std::exp((spec.gamma - spec.rho) * t) + 1.0 - spec.lambda;
  return spec.rho + (1.0 - spec.lambda) * (spec.gamma - spec.rho) / w;
}

double short_rate(const DiscountSpec& spec) {
  if (spec.kind == DiscountKind::exponential) return spec.rho;
  return spec.rho + (1.0 - spec.lambda) * (spec.gamma - spec.rho);
}

}  // namespace tilq
