#include "yiarq/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace yiarq::bounds {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310002;
constexpr double kPi = 3.141592653589793;
}  // namespace

double BoundParams::a_factor() const {
  const double base = std::sqrt(2.0 * ec_over_n0) + u / d_f;
  return 0.5 * base * base + 1.0 / (2.0 * sigma * sigma);
}

double BoundParams::gamma() const { return s * s / (2.0 * sigma * sigma); }

double BoundParams::u_critical() const {
  return d_f * std::sqrt(2.0 * ec_over_n0);
}

BoundParams BoundParams::with_u(double new_u) const {
  BoundParams p = *this;
  p.u = new_u;
  return p;
}

BoundParams BoundParams::from_gamma(double ec_over_n0, double u, int d_f,
                                    double gamma, double sigma2) {
  if (!(sigma2 > 0.0) || gamma < 0.0) {
    throw std::invalid_argument("BoundParams: need sigma2 > 0, gamma >= 0");
  }
  const double sigma = std::sqrt(sigma2);
  BoundParams p{ec_over_n0, u, d_f, sigma, sigma * std::sqrt(2.0 * gamma)};
  p.validate();
  return p;
}

void BoundParams::validate() const {
  if (!(ec_over_n0 > 0.0)) {
    throw std::invalid_argument("BoundParams: ec_over_n0 must be positive");
  }
  if (d_f < 1) {
    throw std::invalid_argument("BoundParams: d_f must be >= 1");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("BoundParams: sigma must be positive");
  }
  if (s < 0.0) {
    throw std::invalid_argument("BoundParams: s must be nonnegative");
  }
  if (!(a_factor() > 0.0)) {
    throw std::invalid_argument("BoundParams: A must be positive");
  }
}

double lambda_theta(double theta, const BoundParams& params) {
  const double a = params.a_factor();
  const double sigma2 = params.sigma * params.sigma;
  const double b = -params.s * std::cos(theta) / sigma2;
  const double r = b / std::sqrt(2.0 * a);
  double eq;  // exp(r^2/2) * Q(r)
  if (r >= -8.0) {
    eq = specfun::scaled_q(r);
  } else {
    eq = std::exp(0.5 * r * r + std::log1p(-specfun::gaussian_q(-r)));
  }
  return (1.0 - r * kSqrt2Pi * eq) / (2.0 * a * sigma2);
}

double d_tilde(const BoundParams& params,
               const specfun::QuadratureSettings& settings) {
  params.validate();
  const double a = params.a_factor();
  const double sigma2 = params.sigma * params.sigma;
  const double gamma = params.gamma();
  const double exp_neg_gamma = std::exp(-gamma);
  // exp(-gamma) * Lambda(theta) evaluated without forming exp(r^2/2), which
  // overflows at large gamma: r^2/2 - gamma <= 0 always since 2*A*sigma^2
  // >= 1.
  auto weighted_lambda = [&](double theta) {
    const double b = -params.s * std::cos(theta) / sigma2;
    const double r = b / std::sqrt(2.0 * a);
    double eq;  // exp(r^2/2 - gamma) * Q(r)
    if (r >= -8.0) {
      eq = std::exp(0.5 * r * r - gamma) * specfun::gaussian_q(r);
    } else {
      eq = std::exp(0.5 * r * r - gamma +
                    std::log1p(-specfun::gaussian_q(-r)));
    }
    return (exp_neg_gamma - r * kSqrt2Pi * eq) / (2.0 * a * sigma2);
  };
  // The integrand is positive and peaks at theta = 0, so its value there
  // bounds the result.  Scaling abs_tol by that peak keeps the quadrature
  // relatively accurate at large gamma, where the integral drops below any
  // fixed absolute tolerance.
  specfun::QuadratureSettings scaled = settings;
  const double peak = weighted_lambda(0.0);
  if (peak > 0.0 && peak < 1.0) {
    scaled.abs_tol = std::max(settings.abs_tol * peak,
                              std::numeric_limits<double>::denorm_min());
  }
  return specfun::integrate(weighted_lambda, 0.0, kPi, scaled) / kPi;
}

double h_tilde(double u, const BoundParams& params) {
  const double base = std::sqrt(2.0 * params.ec_over_n0) + u / params.d_f;
  if (!(base > 0.0)) {
    throw std::domain_error(
        "h_tilde: flag at or beyond the critical value d_f*sqrt(2Ec/N0)");
  }
  const double inv_sigma2 = 1.0 / (params.sigma * params.sigma);
  return 1.0 - inv_sigma2 / (base * base + inv_sigma2);
}

namespace {

// a_k * d^k with the coefficient conversion routed through logarithms when
// it exceeds the double range.
double coefficient_term(const convcode::BigInt& coeff, double d, int k) {
  const double cd = coeff.template convert_to<double>();
  if (std::isfinite(cd)) {
    return cd * std::pow(d, k);
  }
  const auto bits = boost::multiprecision::msb(coeff);
  const convcode::BigInt top = coeff >> (bits > 52 ? bits - 52 : 0u);
  const double log_coeff = std::log(top.template convert_to<double>()) +
                           (bits > 52 ? (bits - 52) : 0u) * std::log(2.0);
  return std::exp(log_coeff + k * std::log(d));
}

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

BoundReport union_bounds(const convcode::TransferCoefficients& coeffs,
                         const BoundParams& params, int H, int m, int n_c,
                         bool require_px) {
  params.validate();
  if (!(params.u >= 0.0)) {
    throw std::invalid_argument("union_bounds: flag u must be nonnegative");
  }
  if (H < 1 || m < 0 || n_c < 1) {
    throw std::invalid_argument("union_bounds: bad block geometry");
  }
  const int k_end = n_c * (H + m);
  if (coeffs.d_f > k_end) {
    throw std::invalid_argument("union_bounds: block shorter than d_f");
  }

  BoundReport report;
  report.k_lo = coeffs.d_f;
  report.k_hi = k_end;
  report.k_enumerated = std::min(coeffs.k_max, k_end);
  report.d_tilde_u = d_tilde(params);

  const bool px_ok = params.u < params.u_critical();
  if (require_px && !px_ok) {
    throw std::domain_error(
        "union_bounds: retransmission bound needs u < d_f*sqrt(2Ec/N0)");
  }
  if (px_ok) {
    report.d_tilde_neg_u = params.u == 0.0
                               ? report.d_tilde_u
                               : d_tilde(params.with_u(-params.u));
  }

  auto partial = [&](const std::vector<convcode::BigInt>& w, double d) {
    KahanSum acc;
    for (int k = report.k_enumerated; k >= coeffs.d_f; --k) {
      const auto& coeff = w[static_cast<std::size_t>(k)];
      if (coeff == 0) continue;
      acc.add(coefficient_term(coeff, d, k));
    }
    return acc.sum;
  };
  // Lemma-2 envelope over the unenumerated remainder: a_k <= 4^k and
  // c_k <= k * a_k.
  auto tail = [&](double d, bool weight_by_k) {
    if (report.k_enumerated >= k_end) return 0.0;
    const double r = 4.0 * d;
    if (!(r < 1.0)) {
      throw std::domain_error(
          "union_bounds: envelope tail needs 4*D < 1; enumerate more "
          "coefficients");
    }
    double rk = std::pow(r, report.k_enumerated + 1);
    KahanSum acc;
    for (int k = report.k_enumerated + 1; k <= k_end; ++k) {
      acc.add(weight_by_k ? k * rk : rk);
      rk *= r;
    }
    return acc.sum;
  };

  const double d_u = report.d_tilde_u;
  report.tail_pe = tail(d_u, false);
  report.tail_pb = tail(d_u, true);
  report.pe = partial(coeffs.a, d_u) + report.tail_pe;
  report.pb = partial(coeffs.c, d_u) + report.tail_pb;
  if (px_ok) {
    const double d_n = *report.d_tilde_neg_u;
    report.tail_px = tail(d_n, false);
    report.px = partial(coeffs.a, d_n) + report.tail_px;
  }
  return report;
}

BoundReport closed_form_bounds(const BoundParams& params) {
  params.validate();
  if (params.d_f != 5) {
    throw std::invalid_argument(
        "closed_form_bounds: valid for the 4-state rate-1/2 code (d_f = 5)");
  }
  if (!(params.u >= 0.0)) {
    throw std::invalid_argument(
        "closed_form_bounds: flag u must be nonnegative");
  }
  BoundReport report;
  report.closed_form = true;
  report.k_lo = 5;
  report.k_hi = -1;  // unbounded series
  report.d_tilde_u = d_tilde(params);
  const double d = report.d_tilde_u;
  if (!(2.0 * d < 1.0)) {
    throw std::domain_error(
        "closed_form_bounds: series diverges (2*D >= 1); use the finite sum");
  }
  const double d5 = std::pow(d, 5);
  report.pe = d5 / (1.0 - 2.0 * d);
  report.pb = d5 / ((1.0 - 2.0 * d) * (1.0 - 2.0 * d));
  if (params.u < params.u_critical()) {
    const double dn =
        params.u == 0.0 ? d : d_tilde(params.with_u(-params.u));
    report.d_tilde_neg_u = dn;
    if (!(2.0 * dn < 1.0)) {
      throw std::domain_error(
          "closed_form_bounds: retransmission series diverges (2*D >= 1)");
    }
    report.px = std::pow(dn, 5) / (1.0 - 2.0 * dn);
  }
  return report;
}

ExponentPredictions exponent_predictions(const BoundParams& params) {
  params.validate();
  ExponentPredictions out;
  out.ebno_slope = -static_cast<double>(params.d_f);
  out.gamma_exponent_pb = params.d_f * h_tilde(params.u, params);
  if (params.u < params.u_critical()) {
    out.gamma_exponent_px = params.d_f * h_tilde(-params.u, params);
  }
  return out;
}

}  // namespace yiarq::bounds
