#pragma once

#include <optional>

#include "yiarq/convcode.hpp"
#include "yiarq/specfun.hpp"

namespace yiarq::bounds {

struct BoundParams {
  double ec_over_n0 = 1.0;
  double u = 0.0;  // may be negative internally for the retransmission route
  int d_f = 1;
  double sigma = 1.0;
  double s = 0.0;

  // A = (1/2)(sqrt(2 E_c/N0) + u/d_f)^2 + 1/(2 sigma^2)
  double a_factor() const;
  double gamma() const;
  // Critical flag d_f * sqrt(2 E_c/N0) above which the retransmission bound
  // is unavailable.
  double u_critical() const;
  BoundParams with_u(double new_u) const;

  static BoundParams from_gamma(double ec_over_n0, double u, int d_f,
                                double gamma, double sigma2);
  void validate() const;
};

// Lambda(theta) = 1/(2 A sigma^2) * [1 - B sqrt(2 pi)/sqrt(2A)
//                 * exp(B^2/(4A)) * Q(B/sqrt(2A))], B = -s cos(theta)/sigma^2.
double lambda_theta(double theta, const BoundParams& params);

// D~ = exp(-gamma)/pi * integral_0^pi Lambda(theta) dtheta, the per-distance
// factor of the union bounds.  Evaluated by adaptive quadrature with the
// exp(-gamma) weight folded into the integrand so large gamma cannot
// overflow.  abs_tol is applied after scaling by the integrand peak, so the
// result stays relatively accurate when the integral is far below 1.
double d_tilde(const BoundParams& params,
               const specfun::QuadratureSettings& settings = {});

// h~(u) = 1 - (1/sigma^2) / ((sqrt(2 E_c/N0) + u/d_f)^2 + 1/sigma^2).
// For negative u the sum sqrt(2 E_c/N0) + u/d_f must stay positive.
double h_tilde(double u, const BoundParams& params);

struct BoundReport {
  double d_tilde_u = 0.0;
  std::optional<double> d_tilde_neg_u;
  double pe = 0.0;
  double pb = 0.0;
  std::optional<double> px;  // absent when u >= u_critical
  int k_lo = 0;
  int k_hi = 0;        // full summation range n_c*(H+m)
  int k_enumerated = 0;  // largest k covered by exact coefficients
  double tail_pe = 0.0;  // envelope additions when k_enumerated < k_hi
  double tail_pb = 0.0;
  double tail_px = 0.0;
  bool closed_form = false;
};

// Finite union bounds pe = sum a_k D^k, pb = sum c_k D^k over
// k = d_f .. n_c*(H+m), px with D evaluated at -u.  When the coefficients
// stop short of the range the 4^k envelope covers the remainder (requires
// 4D < 1).  require_px makes a missing retransmission bound an error
// instead of an absent optional.
BoundReport union_bounds(const convcode::TransferCoefficients& coeffs,
                         const BoundParams& params, int H, int m, int n_c,
                         bool require_px = false);

// Geometric closed forms for the 4-state rate-1/2 example code:
// pe = D^5/(1-2D), pb = D^5/(1-2D)^2.  Requires 2D < 1.
BoundReport closed_form_bounds(const BoundParams& params);

struct ExponentPredictions {
  double ebno_slope = 0.0;        // -d_f
  double gamma_exponent_pb = 0.0;  // d_f * h~(u)
  std::optional<double> gamma_exponent_px;  // d_f * h~(-u) when defined
};

ExponentPredictions exponent_predictions(const BoundParams& params);

}  // namespace yiarq::bounds
