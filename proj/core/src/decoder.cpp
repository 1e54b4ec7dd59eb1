#include "yiarq/decoder.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace yiarq::decoder {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void YIConfig::validate() const {
  if (!(u >= 0.0)) {
    throw std::invalid_argument("YIConfig: flag u must be nonnegative");
  }
  if (d_f < 1) {
    throw std::invalid_argument("YIConfig: d_f must be >= 1");
  }
}

double branch_metric(std::span<const double> alpha, std::span<const int> x,
                     std::span<const double> y) {
  if (alpha.size() != x.size() || alpha.size() != y.size()) {
    throw std::invalid_argument("branch_metric: length mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    sum += alpha[i] * x[i] * y[i];
  }
  return sum;
}

namespace {

// Output-symbol disagreement weight 2*sum(alpha^2) of two branches.
double branch_disagreement(const convcode::Trellis& trellis,
                           std::uint32_t bits_a, std::uint32_t bits_b,
                           const double* alpha) {
  std::uint32_t diff = bits_a ^ bits_b;
  double w = 0.0;
  for (int i = 0; i < trellis.n_c; ++i) {
    if ((diff >> i) & 1u) w += 2.0 * alpha[i] * alpha[i];
  }
  return w;
}

}  // namespace

DecodeOutcome decode(const convcode::Trellis& trellis,
                     const channel::FadedObservation& obs,
                     const channel::ChannelParams& params,
                     const YIConfig& cfg) {
  cfg.validate();
  params.validate();
  const int n_c = trellis.n_c;
  const int S = trellis.num_states;
  if (obs.y.size() != obs.alpha.size()) {
    throw std::invalid_argument("decode: observation/fading length mismatch");
  }
  if (obs.y.empty() || obs.y.size() % static_cast<std::size_t>(n_c) != 0) {
    throw std::invalid_argument(
        "decode: observation length is not a multiple of n_c");
  }
  const int T = static_cast<int>(obs.y.size()) / n_c;
  const int H = T - trellis.m;
  if (H < 1) {
    throw std::invalid_argument("decode: fewer branches than tail bits");
  }

  // Incoming edge lists per state, predecessors in ascending order so metric
  // ties resolve toward the lower-indexed one.
  struct Incoming {
    int prev;
    int bit;
  };
  std::vector<std::vector<Incoming>> incoming(static_cast<std::size_t>(S));
  for (int p = 0; p < S; ++p) {
    for (int b = 0; b < 2; ++b) {
      incoming[static_cast<std::size_t>(
                   trellis.edges[static_cast<std::size_t>(p)]
                                [static_cast<std::size_t>(b)]
                       .next)]
          .push_back({p, b});
    }
  }

  std::vector<double> metric(static_cast<std::size_t>(S), -kInf);
  std::vector<double> next_metric(static_cast<std::size_t>(S));
  std::vector<char> label(static_cast<std::size_t>(S), 1);
  std::vector<char> next_label(static_cast<std::size_t>(S));
  // parent/inbit/margin at index t*S + s describe the surviving branch into
  // state s at level t+1; margin is the largest flag that merge tolerates.
  std::vector<int> parent(static_cast<std::size_t>(T) * S, 0);
  std::vector<std::uint8_t> inbit(static_cast<std::size_t>(T) * S, 0);
  std::vector<double> margin(static_cast<std::size_t>(T) * S, kInf);
  metric[0] = 0.0;

  const double threshold_scale =
      cfg.u / cfg.d_f * std::sqrt(channel::kNoiseVariance);

  // Walks both survivor histories back from a merge at level t+1 until they
  // coincide, accumulating the output disagreement weight.
  auto merge_weight = [&](int t, Incoming c1, Incoming c2) {
    double w = branch_disagreement(
        trellis,
        trellis.edges[static_cast<std::size_t>(c1.prev)]
                     [static_cast<std::size_t>(c1.bit)]
            .out_bits,
        trellis.edges[static_cast<std::size_t>(c2.prev)]
                     [static_cast<std::size_t>(c2.bit)]
            .out_bits,
        obs.alpha.data() + static_cast<std::size_t>(t) * n_c);
    int a = c1.prev;
    int b = c2.prev;
    int tau = t;  // a, b are states at level tau
    while (a != b) {
      const std::size_t ia = static_cast<std::size_t>(tau - 1) * S + a;
      const std::size_t ib = static_cast<std::size_t>(tau - 1) * S + b;
      w += branch_disagreement(
          trellis,
          trellis.edges[static_cast<std::size_t>(parent[ia])][inbit[ia]]
              .out_bits,
          trellis.edges[static_cast<std::size_t>(parent[ib])][inbit[ib]]
              .out_bits,
          obs.alpha.data() + static_cast<std::size_t>(tau - 1) * n_c);
      a = parent[ia];
      b = parent[ib];
      --tau;
    }
    return w;
  };

  for (int t = 0; t < T; ++t) {
    const bool tail = t >= H;
    const double* alpha = obs.alpha.data() + static_cast<std::size_t>(t) * n_c;
    const double* y = obs.y.data() + static_cast<std::size_t>(t) * n_c;
    for (int ns = 0; ns < S; ++ns) {
      Incoming cand[2];
      double cand_metric[2];
      int n_cand = 0;
      for (const auto& in : incoming[static_cast<std::size_t>(ns)]) {
        if (tail && in.bit != 0) continue;
        if (metric[static_cast<std::size_t>(in.prev)] == -kInf) continue;
        const std::uint32_t bits =
            trellis.edges[static_cast<std::size_t>(in.prev)]
                         [static_cast<std::size_t>(in.bit)]
                .out_bits;
        double lambda = 0.0;
        for (int i = 0; i < n_c; ++i) {
          const double axy = alpha[i] * y[i];
          lambda += ((bits >> i) & 1u) ? -axy : axy;
        }
        cand[n_cand] = in;
        cand_metric[n_cand] = metric[static_cast<std::size_t>(in.prev)] + lambda;
        ++n_cand;
      }
      if (n_cand == 0) {
        next_metric[static_cast<std::size_t>(ns)] = -kInf;
        continue;
      }
      int best = 0;
      if (n_cand == 2 && cand_metric[1] > cand_metric[0]) best = 1;
      const std::size_t idx = static_cast<std::size_t>(t) * S + ns;
      parent[idx] = cand[best].prev;
      inbit[idx] = static_cast<std::uint8_t>(cand[best].bit);
      next_metric[static_cast<std::size_t>(ns)] = cand_metric[best];
      char ok = label[static_cast<std::size_t>(cand[best].prev)];
      if (n_cand == 2) {
        const double gap = cand_metric[best] - cand_metric[1 - best];
        const double w = merge_weight(t, cand[best], cand[1 - best]);
        if (w > 0.0) {
          margin[idx] = gap * cfg.d_f /
                        (std::sqrt(channel::kNoiseVariance) * w);
          if (gap < threshold_scale * w) ok = 0;
        }
      }
      next_label[static_cast<std::size_t>(ns)] = ok;
    }
    metric.swap(next_metric);
    label.swap(next_label);
  }

  DecodeOutcome out;
  out.metric = metric[0];
  out.accepted = label[0] != 0;

  std::vector<std::uint8_t> bits(static_cast<std::size_t>(T));
  double u_star = kInf;
  int s = 0;
  for (int t = T; t >= 1; --t) {
    const std::size_t idx = static_cast<std::size_t>(t - 1) * S + s;
    u_star = std::min(u_star, margin[idx]);
    bits[static_cast<std::size_t>(t - 1)] = inbit[idx];
    s = parent[idx];
  }
  out.u_star = u_star;
  bits.resize(static_cast<std::size_t>(H));
  out.bits = std::move(bits);
  return out;
}

double divergence_weight(const convcode::Trellis& trellis,
                         const std::vector<std::uint8_t>& path_a,
                         const std::vector<std::uint8_t>& path_b,
                         std::span<const double> alpha) {
  if (path_a.size() != path_b.size()) {
    throw std::invalid_argument("divergence_weight: paths differ in length");
  }
  if (alpha.size() <
      path_a.size() * static_cast<std::size_t>(trellis.n_c)) {
    throw std::invalid_argument("divergence_weight: alpha too short");
  }
  int state_a = 0;
  int state_b = 0;
  double w = 0.0;
  for (std::size_t t = 0; t < path_a.size(); ++t) {
    const auto& ea =
        trellis.edges[static_cast<std::size_t>(state_a)][path_a[t]];
    const auto& eb =
        trellis.edges[static_cast<std::size_t>(state_b)][path_b[t]];
    const std::uint32_t diff = ea.out_bits ^ eb.out_bits;
    for (int i = 0; i < trellis.n_c; ++i) {
      if ((diff >> i) & 1u) {
        const double a = alpha[t * static_cast<std::size_t>(trellis.n_c) +
                               static_cast<std::size_t>(i)];
        w += 2.0 * a * a;
      }
    }
    state_a = ea.next;
    state_b = eb.next;
  }
  if (state_a != state_b) {
    throw std::invalid_argument("divergence_weight: paths are not co-terminal");
  }
  return w;
}

}  // namespace yiarq::decoder
