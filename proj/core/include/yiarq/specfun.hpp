#pragma once

#include <functional>

namespace yiarq::specfun {

struct QuadratureSettings {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_depth = 50;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Gaussian tail probability Q(x) = P(Z > x) for standard normal Z.
double gaussian_q(double x);

// exp(x^2/2) * Q(x), stable for large positive x where both factors
// over/underflow.  For x < 0 the value itself can exceed the double range
// (it grows like exp(x^2/2)); +inf is returned in that case.
double scaled_q(double x);

// Modified Bessel function of the first kind, order zero.  Throws
// std::range_error for |x| > 700 where the result exceeds the double range.
double bessel_i0(double x);

// Tag for the z = infinity variant of phi.
struct unbounded_t {
  explicit unbounded_t() = default;
};
inline constexpr unbounded_t unbounded{};

// phi(p1, p2, z) = integral_0^z a * exp(-p1*a^2 - p2*a) da.
// The two-argument-plus-tag overload evaluates the closed form for z = inf,
// the double overload the finite-z expression.  p1 must be positive.
double phi(double p1, double p2, unbounded_t);
double phi(double p1, double p2, double z);

// Adaptive Simpson quadrature on [a, b].  Throws std::runtime_error when the
// tolerance cannot be met within settings.max_depth bisection levels.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    const QuadratureSettings& settings);

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSettings& settings = {});

}  // namespace yiarq::specfun
