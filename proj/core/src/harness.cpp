#include "yiarq/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "yiarq/decoder.hpp"

namespace yiarq::harness {

namespace {
constexpr double kZ95 = 1.959963984540054;
constexpr std::uint64_t kStopCheckChunk = 4096;
}  // namespace

Estimate estimate(std::uint64_t k, std::uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("estimate: empty denominator");
  }
  if (k > n) {
    throw std::invalid_argument("estimate: k exceeds n");
  }
  Estimate e;
  e.k = k;
  e.n = n;
  const double nd = static_cast<double>(n);
  const double p = static_cast<double>(k) / nd;
  e.p_hat = p;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / nd;
  const double center = (p + z2 / (2.0 * nd)) / denom;
  const double half =
      kZ95 * std::sqrt(p * (1.0 - p) / nd + z2 / (4.0 * nd * nd)) / denom;
  e.ci_low = k == 0 ? 0.0 : std::max(0.0, center - half);
  e.ci_high = k == n ? 1.0 : std::min(1.0, center + half);
  return e;
}

FlagSpec FlagSpec::parse(const std::string& token) {
  FlagSpec spec;
  std::string num = token;
  if (token.size() >= 2 && token.compare(token.size() - 2, 2, "u0") == 0) {
    spec.relative = true;
    num = token.substr(0, token.size() - 2);
    if (num.empty()) num = "1";
  }
  std::size_t used = 0;
  try {
    spec.value = std::stod(num, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad flag token \"" + token + "\"");
  }
  if (used != num.size() || !(spec.value >= 0.0)) {
    throw std::invalid_argument("bad flag token \"" + token + "\"");
  }
  return spec;
}

double FlagSpec::resolve(double ec_over_n0, int d_f) const {
  if (!relative) return value;
  return value * d_f * std::sqrt(2.0 * ec_over_n0);
}

std::string FlagSpec::str() const {
  return relative ? format_double(value) + "u0" : format_double(value);
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  auto parse_num = [](const std::string& tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad grid token \"" + tok + "\"");
    }
    if (used != tok.size()) {
      throw std::invalid_argument("bad grid token \"" + tok + "\"");
    }
    return v;
  };
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string tok = text.substr(pos, comma - pos);
    if (tok.empty()) {
      throw std::invalid_argument("empty grid token in \"" + text + "\"");
    }
    const std::size_t c1 = tok.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_num(tok));
    } else {
      const std::size_t c2 = tok.find(':', c1 + 1);
      if (c2 == std::string::npos) {
        throw std::invalid_argument("grid range needs start:step:stop, got \"" +
                                    tok + "\"");
      }
      const double start = parse_num(tok.substr(0, c1));
      const double step = parse_num(tok.substr(c1 + 1, c2 - c1 - 1));
      const double stop = parse_num(tok.substr(c2 + 1));
      if (!(step > 0.0)) {
        throw std::invalid_argument("grid step must be positive");
      }
      for (int i = 0;; ++i) {
        const double v = start + i * step;
        if (v > stop + 1e-9 * step) break;
        out.push_back(v);
      }
    }
    pos = comma + 1;
  }
  return out;
}

void ExperimentConfig::validate() const {
  code.validate();
  if (H < 1) {
    throw std::invalid_argument("config: H must be >= 1");
  }
  if (ebno_db.empty() || gammas.empty() || sigma2s.empty() || flags.empty()) {
    throw std::invalid_argument("config: empty sweep grid");
  }
  for (double s2 : sigma2s) {
    if (!(s2 > 0.0)) {
      throw std::invalid_argument("config: sigma2 must be positive");
    }
  }
  for (double g : gammas) {
    if (g < 0.0) {
      throw std::invalid_argument("config: gamma must be nonnegative");
    }
  }
  for (const auto& f : flags) {
    if (!(f.value >= 0.0)) {
      throw std::invalid_argument("config: flags must be nonnegative");
    }
  }
  if (threads < 1) {
    throw std::invalid_argument("config: threads must be >= 1");
  }
  if (stop_events && *stop_events < 1) {
    throw std::invalid_argument("config: stop_events must be >= 1");
  }
}

namespace {

struct SweepContext {
  convcode::Trellis trellis;
  convcode::TransferCoefficients coeffs;
  int d_f = 0;
};

SweepContext make_context(const ExperimentConfig& config) {
  SweepContext ctx;
  ctx.trellis = convcode::build_trellis(config.code);
  const int k_end = config.code.n_c * (config.H + config.code.m);
  ctx.coeffs = convcode::compute_transfer_coefficients(ctx.trellis, k_end);
  ctx.d_f = convcode::free_distance(ctx.trellis, k_end);
  return ctx;
}

struct CellCounters {
  std::uint64_t frames = 0;
  std::uint64_t bit_errors_all = 0;
  std::vector<std::uint64_t> rejected;       // per flag
  std::vector<std::uint64_t> bit_errors_acc;  // per flag, accepted frames

  explicit CellCounters(std::size_t flags)
      : rejected(flags, 0), bit_errors_acc(flags, 0) {}

  void merge(const CellCounters& other) {
    frames += other.frames;
    bit_errors_all += other.bit_errors_all;
    for (std::size_t i = 0; i < rejected.size(); ++i) {
      rejected[i] += other.rejected[i];
      bit_errors_acc[i] += other.bit_errors_acc[i];
    }
  }
};

void run_trials(const ExperimentConfig& config, const SweepContext& ctx,
                const channel::ChannelParams& chp,
                const std::vector<double>& u_values, std::uint64_t cell_index,
                std::uint64_t first, std::uint64_t last, CellCounters& out) {
  const int H = config.H;
  std::vector<std::uint8_t> info(static_cast<std::size_t>(H));
  const decoder::YIConfig dcfg{0.0, ctx.d_f};
  for (std::uint64_t trial = first; trial < last; ++trial) {
    channel::RandomStream rng(config.seed, (cell_index << 32) | trial);
    for (auto& bit : info) {
      bit = static_cast<std::uint8_t>(rng.next_u32() >> 31);
    }
    const auto symbols = convcode::encode(ctx.trellis, info);
    const auto obs = channel::transmit(symbols, chp, config.fading,
                                       ctx.trellis.n_c, rng);
    const auto outcome = decoder::decode(ctx.trellis, obs, chp, dcfg);
    std::uint64_t errors = 0;
    for (int i = 0; i < H; ++i) {
      errors += outcome.bits[static_cast<std::size_t>(i)] !=
                info[static_cast<std::size_t>(i)];
    }
    ++out.frames;
    out.bit_errors_all += errors;
    for (std::size_t j = 0; j < u_values.size(); ++j) {
      if (u_values[j] <= outcome.u_star) {
        out.bit_errors_acc[j] += errors;
      } else {
        ++out.rejected[j];
      }
    }
  }
}

CellCounters run_cell(const ExperimentConfig& config, const SweepContext& ctx,
                      const channel::ChannelParams& chp,
                      const std::vector<double>& u_values,
                      std::uint64_t cell_index) {
  CellCounters total(u_values.size());
  std::uint64_t done = 0;
  while (done < config.trials) {
    const std::uint64_t batch =
        config.stop_events ? std::min(kStopCheckChunk, config.trials - done)
                           : config.trials - done;
    const int workers =
        static_cast<int>(std::min<std::uint64_t>(config.threads, batch));
    if (workers <= 1) {
      run_trials(config, ctx, chp, u_values, cell_index, done, done + batch,
                 total);
    } else {
      std::vector<CellCounters> partial(static_cast<std::size_t>(workers),
                                        CellCounters(u_values.size()));
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(workers));
      for (int w = 0; w < workers; ++w) {
        const std::uint64_t lo = done + batch * w / workers;
        const std::uint64_t hi = done + batch * (w + 1) / workers;
        pool.emplace_back(run_trials, std::cref(config), std::cref(ctx),
                          std::cref(chp), std::cref(u_values), cell_index, lo,
                          hi, std::ref(partial[static_cast<std::size_t>(w)]));
      }
      for (auto& t : pool) t.join();
      for (const auto& p : partial) total.merge(p);
    }
    done += batch;
    if (config.stop_events && total.bit_errors_all >= *config.stop_events) {
      break;
    }
  }
  return total;
}

std::vector<SweepRow> run_point_impl(const ExperimentConfig& config,
                                     const SweepContext& ctx,
                                     const CellSpec& cell,
                                     std::uint64_t cell_index) {
  const double ecn0 =
      channel::ebno_to_ecno(std::pow(10.0, cell.ebno_db / 10.0), config.H,
                            config.code.m, config.code.rate());
  std::vector<double> u_values;
  u_values.reserve(config.flags.size());
  for (const auto& f : config.flags) {
    u_values.push_back(f.resolve(ecn0, ctx.d_f));
  }

  std::vector<SweepRow> rows;
  rows.reserve(config.flags.size());
  for (double u : u_values) {
    const auto bp = bounds::BoundParams::from_gamma(ecn0, u, ctx.d_f,
                                                    cell.gamma, cell.sigma2);
    const auto report = bounds::union_bounds(ctx.coeffs, bp, config.H,
                                             config.code.m, config.code.n_c);
    SweepRow row;
    row.ebno_db = cell.ebno_db;
    row.gamma = cell.gamma;
    row.sigma2 = cell.sigma2;
    row.u = u;
    row.pe_bound = report.pe;
    row.pb_bound = report.pb;
    row.px_bound = report.px;
    row.seed = config.seed;
    row.rng_algorithm_id = channel::kRngAlgorithmId;
    rows.push_back(std::move(row));
  }

  if (config.trials > 0) {
    const auto chp =
        channel::ChannelParams::from_gamma(ecn0, cell.gamma, cell.sigma2);
    const CellCounters counts =
        run_cell(config, ctx, chp, u_values, cell_index);
    const std::uint64_t n = counts.frames;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      SweepRow& row = rows[j];
      row.trials = n;
      row.px_mc = estimate(counts.rejected[j], n);
      row.pb_all_mc = estimate(counts.bit_errors_all,
                               n * static_cast<std::uint64_t>(config.H));
      const std::uint64_t accepted = n - counts.rejected[j];
      if (accepted > 0) {
        row.pb_mc = estimate(counts.bit_errors_acc[j],
                             accepted * static_cast<std::uint64_t>(config.H));
      }
    }
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> run_point(const ExperimentConfig& config,
                                const CellSpec& cell,
                                std::uint64_t cell_index) {
  config.validate();
  const SweepContext ctx = make_context(config);
  return run_point_impl(config, ctx, cell, cell_index);
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
  config.validate();
  const SweepContext ctx = make_context(config);
  std::vector<SweepRow> rows;
  std::uint64_t cell_index = 0;
  for (double ebno : config.ebno_db) {
    for (double gamma : config.gammas) {
      for (double sigma2 : config.sigma2s) {
        auto cell_rows = run_point_impl(
            config, ctx, CellSpec{ebno, gamma, sigma2}, cell_index);
        rows.insert(rows.end(), std::make_move_iterator(cell_rows.begin()),
                    std::make_move_iterator(cell_rows.end()));
        ++cell_index;
      }
    }
  }
  return rows;
}

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

void write_estimate(std::ostream& out, const std::optional<Estimate>& e) {
  if (e) {
    out << format_double(e->p_hat) << ',' << format_double(e->ci_low) << ','
        << format_double(e->ci_high) << ',' << e->k << ',' << e->n;
  } else {
    out << "nan,nan,nan,0,0";
  }
}

void write_opt(std::ostream& out, const std::optional<double>& v) {
  out << (v ? format_double(*v) : "nan");
}

}  // namespace

void write_csv(std::ostream& out, const ExperimentConfig& config,
               const std::vector<SweepRow>& rows) {
  out << "# yiarq sweep v" << kVersion << "\n";
  out << "# code: " << config.code.to_octal() << "\n";
  out << "# m: " << config.code.m << "\n";
  out << "# n_c: " << config.code.n_c << "\n";
  out << "# H: " << config.H << "\n";
  out << "# fading: " << channel::fading_mode_name(config.fading) << "\n";
  out << "# u: ";
  for (std::size_t i = 0; i < config.flags.size(); ++i) {
    if (i) out << ',';
    out << config.flags[i].str();
  }
  out << "\n";
  out << "# trials: " << config.trials << "\n";
  if (config.stop_events) {
    out << "# stop_events: " << *config.stop_events << "\n";
  }
  out << "# seed: " << config.seed << "\n";
  out << "# rng: " << channel::kRngAlgorithmId << "\n";
  out << "ebno_db,gamma,sigma2,u,"
         "pb_mc,pb_mc_ci_low,pb_mc_ci_high,pb_mc_k,pb_mc_n,"
         "px_mc,px_mc_ci_low,px_mc_ci_high,px_mc_k,px_mc_n,"
         "pb_all_mc,pb_all_mc_ci_low,pb_all_mc_ci_high,pb_all_mc_k,"
         "pb_all_mc_n,"
         "pe_bound,pb_bound,px_bound,trials,seed,rng_algorithm_id\n";
  for (const auto& row : rows) {
    out << format_double(row.ebno_db) << ',' << format_double(row.gamma) << ','
        << format_double(row.sigma2) << ',' << format_double(row.u) << ',';
    write_estimate(out, row.pb_mc);
    out << ',';
    write_estimate(out, row.px_mc);
    out << ',';
    write_estimate(out, row.pb_all_mc);
    out << ',';
    write_opt(out, row.pe_bound);
    out << ',';
    write_opt(out, row.pb_bound);
    out << ',';
    write_opt(out, row.px_bound);
    out << ',' << row.trials << ',' << row.seed << ',' << row.rng_algorithm_id
        << "\n";
  }
}

void run_sweep_to_file(const ExperimentConfig& config,
                       const std::string& path) {
  const auto rows = run_sweep(config);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file \"" + path + "\"");
  }
  write_csv(out, config, rows);
  if (!out.good()) {
    throw std::runtime_error("write failed for \"" + path + "\"");
  }
}

}  // namespace yiarq::harness
