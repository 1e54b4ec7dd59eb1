#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "yiarq/channel.hpp"
#include "yiarq/convcode.hpp"

namespace yiarq::decoder {

struct YIConfig {
  double u = 0.0;  // nonnegative reliability flag; 0 is plain Viterbi
  int d_f = 1;
  void validate() const;
};

struct DecodeOutcome {
  std::vector<std::uint8_t> bits;  // H decoded information bits
  bool accepted = true;            // false requests a retransmission
  double metric = 0.0;             // final survivor path metric
  // Largest flag at which this frame would still be accepted: the frame is
  // accepted exactly when u <= u_star.  Survivors never depend on u, so one
  // decode serves a whole flag sweep.
  double u_star = 0.0;
};

// CSI-weighted correlation sum(alpha * x * y) over one branch.
double branch_metric(std::span<const double> alpha, std::span<const int> x,
                     std::span<const double> y);

// Viterbi decoding with the fading-adapted reliability test: at each merge
// the winner keeps its C label only if it beats the loser by
// (u/d_f) * sqrt(N0/2) * sum|x'-x| alpha^2 over the divergence span.
// Labels are sticky; the frame is accepted if the final survivor carries C.
// The trellis is assumed terminated, so the last m inputs are forced to 0.
DecodeOutcome decode(const convcode::Trellis& trellis,
                     const channel::FadedObservation& obs,
                     const channel::ChannelParams& params,
                     const YIConfig& cfg);

// 2 * sum(alpha^2) over the symbol positions where the two paths' outputs
// differ.  Paths are input-bit sequences from state 0 of equal length and
// must end in the same state.
double divergence_weight(const convcode::Trellis& trellis,
                         const std::vector<std::uint8_t>& path_a,
                         const std::vector<std::uint8_t>& path_b,
                         std::span<const double> alpha);

}  // namespace yiarq::decoder
