#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "yiarq/bounds.hpp"
#include "yiarq/channel.hpp"
#include "yiarq/convcode.hpp"

namespace yiarq::harness {

inline constexpr char kVersion[] = "0.1.0";

// 95% Wilson score interval.
struct Estimate {
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t k = 0;
  std::uint64_t n = 0;
};

Estimate estimate(std::uint64_t k, std::uint64_t n);

// Flag value, either absolute ("0.4") or a fraction of the per-cell critical
// flag d_f * sqrt(2 E_c/N0) ("0.9u0").
struct FlagSpec {
  double value = 0.0;
  bool relative = false;

  static FlagSpec parse(const std::string& token);
  double resolve(double ec_over_n0, int d_f) const;
  std::string str() const;
};

// "a:b:c" inclusive range with step b, or a comma list of scalars.
std::vector<double> parse_grid(const std::string& text);

struct ExperimentConfig {
  convcode::CodeSpec code;
  int H = 100;
  channel::FadingMode fading = channel::FadingMode::iid;
  std::vector<double> ebno_db;
  std::vector<double> gammas;
  std::vector<double> sigma2s;
  std::vector<FlagSpec> flags;
  std::uint64_t trials = 0;  // 0 runs the analytical sweep only
  // Optional early stop: finish once this many all-frames bit-error events
  // have accumulated (checked at fixed chunk boundaries, so results do not
  // depend on the worker count); trials acts as the cap.
  std::optional<std::uint64_t> stop_events;
  std::uint64_t seed = 1;
  int threads = 1;

  void validate() const;
};

struct SweepRow {
  double ebno_db = 0.0;
  double gamma = 0.0;
  double sigma2 = 0.0;
  double u = 0.0;
  // pb_mc counts bit errors over accepted frames only; pb_all_mc over all
  // frames.  pb_mc is absent when no frame was accepted.
  std::optional<Estimate> pb_mc;
  std::optional<Estimate> px_mc;
  std::optional<Estimate> pb_all_mc;
  std::optional<double> pe_bound;
  std::optional<double> pb_bound;
  std::optional<double> px_bound;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string rng_algorithm_id;
};

struct CellSpec {
  double ebno_db = 0.0;
  double gamma = 0.0;
  double sigma2 = 0.5;
};

// One sweep cell: a single channel realization per trial serves every flag
// in config.flags (decoded bits are u-invariant), P_x counts rejected
// frames, P_b counts bit errors over accepted frames.  Trial t of cell c
// draws from stream_id (c << 32) | t regardless of scheduling.
std::vector<SweepRow> run_point(const ExperimentConfig& config,
                                const CellSpec& cell,
                                std::uint64_t cell_index);

// All grid cells in deterministic order (ebno, gamma, sigma2 nested loops),
// one row per (cell, flag).
std::vector<SweepRow> run_sweep(const ExperimentConfig& config);

void write_csv(std::ostream& out, const ExperimentConfig& config,
               const std::vector<SweepRow>& rows);

void run_sweep_to_file(const ExperimentConfig& config,
                       const std::string& path);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace yiarq::harness
