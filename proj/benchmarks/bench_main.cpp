#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "yiarq/bounds.hpp"
#include "yiarq/channel.hpp"
#include "yiarq/convcode.hpp"
#include "yiarq/decoder.hpp"
#include "yiarq/rng.hpp"

namespace {

using namespace yiarq;

void philox_block(benchmark::State& state) {
  std::array<std::uint32_t, 4> counter{1, 2, 3, 4};
  const std::array<std::uint32_t, 2> key{5, 6};
  for (auto _ : state) {
    counter = channel::philox4x32(counter, key);
    benchmark::DoNotOptimize(counter);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(philox_block);

void rician_draw(benchmark::State& state) {
  const auto params = channel::ChannelParams::from_gamma(1.0, 5.0, 0.5);
  channel::RandomStream rng(1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(channel::sample_rician(params, rng));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(rician_draw);

std::vector<std::uint8_t> random_info(int H, channel::RandomStream& rng) {
  std::vector<std::uint8_t> info(static_cast<std::size_t>(H));
  for (auto& b : info) b = static_cast<std::uint8_t>(rng.next_u32() >> 31);
  return info;
}

void encode_frame(benchmark::State& state) {
  const auto trellis =
      convcode::build_trellis(convcode::CodeSpec::from_octal("5,7"));
  channel::RandomStream rng(2, 0);
  const auto info = random_info(100, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(convcode::encode(trellis, info));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(encode_frame);

void decode_frame(benchmark::State& state) {
  const auto spec = convcode::CodeSpec::from_octal("5,7");
  const auto trellis = convcode::build_trellis(spec);
  const auto params = channel::ChannelParams::from_gamma(1.0, 5.0, 0.5);
  channel::RandomStream rng(3, 0);
  const auto info = random_info(100, rng);
  const auto x = convcode::encode(trellis, info);
  const auto obs =
      channel::transmit(x, params, channel::FadingMode::iid, spec.n_c, rng);
  const decoder::YIConfig cfg{0.0, 5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(decoder::decode(trellis, obs, params, cfg));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(decode_frame);

void transmit_frame(benchmark::State& state) {
  const auto spec = convcode::CodeSpec::from_octal("5,7");
  const auto trellis = convcode::build_trellis(spec);
  const auto params = channel::ChannelParams::from_gamma(1.0, 5.0, 0.5);
  channel::RandomStream rng(4, 0);
  const auto info = random_info(100, rng);
  const auto x = convcode::encode(trellis, info);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        channel::transmit(x, params, channel::FadingMode::iid, spec.n_c, rng));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(transmit_frame);

void d_tilde_quadrature(benchmark::State& state) {
  const auto p = bounds::BoundParams::from_gamma(2.0, 1.0, 5, 5.0, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bounds::d_tilde(p));
  }
}
BENCHMARK(d_tilde_quadrature);

void transfer_coefficients(benchmark::State& state) {
  const auto trellis =
      convcode::build_trellis(convcode::CodeSpec::from_octal("5,7"));
  const int k_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        convcode::compute_transfer_coefficients(trellis, k_max));
  }
}
BENCHMARK(transfer_coefficients)->Arg(16)->Arg(64)->Arg(204);

void union_bounds_full(benchmark::State& state) {
  const auto spec = convcode::CodeSpec::from_octal("5,7");
  const auto trellis = convcode::build_trellis(spec);
  const int H = 100;
  const auto tc =
      convcode::compute_transfer_coefficients(trellis, spec.n_c * (H + spec.m));
  const auto p = bounds::BoundParams::from_gamma(2.0, 1.0, 5, 5.0, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bounds::union_bounds(tc, p, H, spec.m, spec.n_c));
  }
}
BENCHMARK(union_bounds_full);

}  // namespace

BENCHMARK_MAIN();
