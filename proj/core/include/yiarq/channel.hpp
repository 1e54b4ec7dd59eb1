#pragma once

#include <string_view>
#include <vector>

#include "yiarq/rng.hpp"

namespace yiarq::channel {

// The noise spectral density is normalized to N0 = 1, so each real noise
// sample has variance N0/2 = 1/2 and sqrt(E_c) = sqrt(ec_over_n0).
inline constexpr double kN0 = 1.0;
inline constexpr double kNoiseVariance = 0.5;

struct ChannelParams {
  double ec_over_n0 = 1.0;  // linear
  double s = 0.0;           // line-of-sight amplitude
  double sigma = 1.0;       // diffuse scale

  double gamma() const { return s * s / (2.0 * sigma * sigma); }
  double sqrt_ec() const;

  static ChannelParams from_s_sigma(double ec_over_n0, double s, double sigma);
  // gamma and sigma^2 given, s = sigma * sqrt(2 gamma) derived.
  static ChannelParams from_gamma(double ec_over_n0, double gamma,
                                  double sigma2);
  void validate() const;
};

enum class FadingMode {
  iid,               // fresh Rician draw per coded symbol
  block_interleaved  // per-subchannel fading, constant over n_c branches
};

FadingMode parse_fading_mode(std::string_view text);
std::string_view fading_mode_name(FadingMode mode);

struct FadedObservation {
  std::vector<double> y;
  std::vector<double> alpha;
};

// Rician envelope sqrt((s + sigma Z1)^2 + (sigma Z2)^2).
double sample_rician(const ChannelParams& params, RandomStream& rng);

// y = sqrt(E_c) * alpha * x + n with the supplied fading and noise vectors.
// Deterministic core of transmit, also usable directly from tests.
FadedObservation apply_channel(const std::vector<int>& x,
                               const std::vector<double>& alpha,
                               const std::vector<double>& noise,
                               const ChannelParams& params);

// Draws fading per mode and Gaussian noise of variance N0/2, then applies
// the channel.  n_c is the branch width used by the block-interleaved mode.
FadedObservation transmit(const std::vector<int>& x,
                          const ChannelParams& params, FadingMode mode,
                          int n_c, RandomStream& rng);

// E_c/N0 = (E_b/N0) * R_c * H / (H + m) and its inverse.
double ebno_to_ecno(double eb_over_n0, int H, int m, double rate);
double ecno_to_ebno(double ec_over_n0, int H, int m, double rate);

}  // namespace yiarq::channel
