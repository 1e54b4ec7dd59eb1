#include "yiarq/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace yiarq::specfun {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;
constexpr double kBesselOverflowArg = 700.0;
}  // namespace

double gaussian_q(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double scaled_q(double x) {
  if (x < 0.0) {
    // exp(x^2/2) - scaled_q(-x); overflows to +inf for x < -38, which is
    // the honest value of the function there.
    return std::exp(0.5 * x * x) - scaled_q(-x);
  }
  if (x < 8.0) {
    return std::exp(0.5 * x * x) * gaussian_q(x);
  }
  // Asymptotic series Q(x) ~ phi(x)/x * sum (-1)^n (2n-1)!!/x^(2n),
  // truncated at the smallest term.
  const double inv_x2 = 1.0 / (x * x);
  double term = 1.0;
  double sum = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= 40; ++n) {
    term *= -(2.0 * n - 1.0) * inv_x2;
    if (std::abs(term) >= prev) break;
    sum += term;
    prev = std::abs(term);
    if (prev < 1e-18 * std::abs(sum)) break;
  }
  return sum / (x * kSqrt2Pi);
}

double bessel_i0(double x) {
  x = std::abs(x);
  if (x > kBesselOverflowArg) {
    throw std::range_error("bessel_i0: argument above overflow threshold 700");
  }
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 1000; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

static void check_phi_args(double p1) {
  if (!(p1 > 0.0)) {
    throw std::invalid_argument("phi: p1 must be positive");
  }
}

double phi(double p1, double p2, unbounded_t) {
  check_phi_args(p1);
  const double r = p2 / std::sqrt(2.0 * p1);
  double eq;  // exp(r^2/2) * Q(r), kept finite for very negative r
  if (r >= -8.0) {
    eq = scaled_q(r);
  } else {
    eq = std::exp(0.5 * r * r + std::log1p(-gaussian_q(-r)));
  }
  return (1.0 - p2 * kSqrt2Pi / std::sqrt(2.0 * p1) * eq) / (2.0 * p1);
}

double phi(double p1, double p2, double z) {
  check_phi_args(p1);
  if (!(z > 0.0)) {
    throw std::invalid_argument("phi: z must be positive");
  }
  const double sq = std::sqrt(2.0 * p1);
  const double r = p2 / sq;
  const double q_span = gaussian_q(r) - gaussian_q(sq * (z + p2 / (2.0 * p1)));
  return (1.0 - std::exp(-p1 * z * z - p2 * z) -
          p2 * kSqrt2Pi / sq * std::exp(0.5 * r * r) * q_span) /
         (2.0 * p1);
}

namespace {

struct SimpsonState {
  const std::function<double(double)>& f;
  int max_depth;
  double error_sum = 0.0;

  double recurse(double a, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double h = b - a;
    const double left = h / 12.0 * (fa + 4.0 * flm + fm);
    const double right = h / 12.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) {
      error_sum += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth >= max_depth) {
      throw std::runtime_error(
          "integrate: tolerance not reached within max_depth");
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    const QuadratureSettings& settings) {
  if (!(settings.abs_tol > 0.0) || !(settings.rel_tol > 0.0) ||
      settings.max_depth < 1) {
    throw std::invalid_argument("integrate: bad quadrature settings");
  }
  if (a > b) {
    throw std::invalid_argument("integrate: a must not exceed b");
  }
  if (a == b) return {0.0, 0.0};

  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double tol =
      std::max(settings.abs_tol, settings.rel_tol * std::abs(whole));

  SimpsonState state{f, settings.max_depth};
  const double value = state.recurse(a, b, fa, fm, fb, whole, tol, 0);
  return {value, state.error_sum};
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSettings& settings) {
  return integrate_adaptive(f, a, b, settings).value;
}

}  // namespace yiarq::specfun
