#include "yiarq/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace yiarq::channel {

double ChannelParams::sqrt_ec() const { return std::sqrt(ec_over_n0 * kN0); }

ChannelParams ChannelParams::from_s_sigma(double ec_over_n0, double s,
                                          double sigma) {
  ChannelParams p{ec_over_n0, s, sigma};
  p.validate();
  return p;
}

ChannelParams ChannelParams::from_gamma(double ec_over_n0, double gamma,
                                        double sigma2) {
  if (!(sigma2 > 0.0) || gamma < 0.0) {
    throw std::invalid_argument("ChannelParams: need sigma2 > 0, gamma >= 0");
  }
  const double sigma = std::sqrt(sigma2);
  ChannelParams p{ec_over_n0, sigma * std::sqrt(2.0 * gamma), sigma};
  p.validate();
  return p;
}

void ChannelParams::validate() const {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("ChannelParams: sigma must be positive");
  }
  if (s < 0.0) {
    throw std::invalid_argument("ChannelParams: s must be nonnegative");
  }
  if (!(ec_over_n0 > 0.0)) {
    throw std::invalid_argument("ChannelParams: ec_over_n0 must be positive");
  }
}

FadingMode parse_fading_mode(std::string_view text) {
  if (text == "iid") return FadingMode::iid;
  if (text == "block" || text == "block-interleaved") {
    return FadingMode::block_interleaved;
  }
  throw std::invalid_argument("unknown fading mode \"" + std::string(text) +
                              "\" (expected iid or block-interleaved)");
}

std::string_view fading_mode_name(FadingMode mode) {
  return mode == FadingMode::iid ? "iid" : "block-interleaved";
}

double sample_rician(const ChannelParams& params, RandomStream& rng) {
  const double in_phase = params.s + params.sigma * rng.normal();
  const double quadrature = params.sigma * rng.normal();
  return std::sqrt(in_phase * in_phase + quadrature * quadrature);
}

FadedObservation apply_channel(const std::vector<int>& x,
                               const std::vector<double>& alpha,
                               const std::vector<double>& noise,
                               const ChannelParams& params) {
  if (x.empty()) {
    throw std::invalid_argument("apply_channel: empty symbol sequence");
  }
  if (alpha.size() != x.size() || noise.size() != x.size()) {
    throw std::invalid_argument("apply_channel: length mismatch");
  }
  const double amp = params.sqrt_ec();
  FadedObservation obs;
  obs.alpha = alpha;
  obs.y.resize(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    obs.y[t] = amp * alpha[t] * x[t] + noise[t];
  }
  return obs;
}

FadedObservation transmit(const std::vector<int>& x,
                          const ChannelParams& params, FadingMode mode,
                          int n_c, RandomStream& rng) {
  params.validate();
  if (x.empty()) {
    throw std::invalid_argument("transmit: empty symbol sequence");
  }
  std::vector<double> alpha(x.size());
  switch (mode) {
    case FadingMode::iid:
      for (auto& a : alpha) a = sample_rician(params, rng);
      break;
    case FadingMode::block_interleaved: {
      if (n_c < 1 || x.size() % static_cast<std::size_t>(n_c) != 0) {
        throw std::invalid_argument(
            "transmit: block-interleaved mode needs a whole number of "
            "branches");
      }
      // Symbol i of branch j rides subchannel i; each subchannel's fading is
      // constant over n_c consecutive branches.
      const std::size_t branches = x.size() / static_cast<std::size_t>(n_c);
      const std::size_t blocks =
          (branches + static_cast<std::size_t>(n_c) - 1) /
          static_cast<std::size_t>(n_c);
      std::vector<double> sub(static_cast<std::size_t>(n_c) * blocks);
      for (auto& a : sub) a = sample_rician(params, rng);
      for (std::size_t j = 0; j < branches; ++j) {
        for (int i = 0; i < n_c; ++i) {
          alpha[j * static_cast<std::size_t>(n_c) +
                static_cast<std::size_t>(i)] =
              sub[static_cast<std::size_t>(i) * blocks +
                  j / static_cast<std::size_t>(n_c)];
        }
      }
      break;
    }
    default:
      throw std::invalid_argument("transmit: unknown fading mode");
  }
  std::vector<double> noise(x.size());
  const double noise_std = std::sqrt(kNoiseVariance);
  for (auto& n : noise) n = noise_std * rng.normal();
  return apply_channel(x, alpha, noise, params);
}

double ebno_to_ecno(double eb_over_n0, int H, int m, double rate) {
  if (H < 1 || m < 0 || !(rate > 0.0) || rate > 1.0) {
    throw std::invalid_argument("ebno_to_ecno: bad block geometry");
  }
  return eb_over_n0 * rate * static_cast<double>(H) / (H + m);
}

double ecno_to_ebno(double ec_over_n0, int H, int m, double rate) {
  if (H < 1 || m < 0 || !(rate > 0.0) || rate > 1.0) {
    throw std::invalid_argument("ecno_to_ebno: bad block geometry");
  }
  return ec_over_n0 / rate * (static_cast<double>(H) + m) / H;
}

}  // namespace yiarq::channel
