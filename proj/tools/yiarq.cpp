// Command line front end: analytical bound sweeps, Monte-Carlo simulation,
// transfer coefficient tables and exponent predictions, all emitted as CSV.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "yiarq/bounds.hpp"
#include "yiarq/channel.hpp"
#include "yiarq/convcode.hpp"
#include "yiarq/harness.hpp"

namespace {

using yiarq::harness::format_double;

struct SweepOptions {
  std::string code = "5,7";
  int H = 100;
  std::string gamma = "5";
  std::string sigma2 = "0.5";
  std::string u = "0";
  std::string ebno_db;
  std::string out;
};

struct SimulateOptions {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  std::string fading = "iid";
  int threads = 1;
  std::optional<std::uint64_t> stop_events;
};

void add_sweep_options(CLI::App& cmd, SweepOptions& opt) {
  cmd.add_option("--code", opt.code, "Generator polynomials, octal (e.g. 5,7)")
      ->capture_default_str();
  cmd.add_option("--H", opt.H, "Information bits per frame")
      ->capture_default_str();
  cmd.add_option("--gamma", opt.gamma,
                 "Rician factor grid (comma list or a:step:b)")
      ->capture_default_str();
  cmd.add_option("--sigma2", opt.sigma2,
                 "Diffuse variance grid (comma list or a:step:b)")
      ->capture_default_str();
  cmd.add_option("--u", opt.u,
                 "Flag thresholds, comma list; a 'u0' suffix scales by "
                 "d_f*sqrt(2Ec/N0) per cell (e.g. 0,0.5u0)")
      ->capture_default_str();
  cmd.add_option("--ebno-db", opt.ebno_db,
                 "Eb/N0 grid in dB (comma list or a:step:b)")
      ->required();
  cmd.add_option("--out", opt.out, "Output CSV path (default: stdout)");
}

yiarq::harness::ExperimentConfig make_config(const SweepOptions& sweep) {
  yiarq::harness::ExperimentConfig config;
  config.code = yiarq::convcode::CodeSpec::from_octal(sweep.code);
  config.H = sweep.H;
  config.ebno_db = yiarq::harness::parse_grid(sweep.ebno_db);
  config.gammas = yiarq::harness::parse_grid(sweep.gamma);
  config.sigma2s = yiarq::harness::parse_grid(sweep.sigma2);
  std::string token;
  std::stringstream us(sweep.u);
  while (std::getline(us, token, ',')) {
    config.flags.push_back(yiarq::harness::FlagSpec::parse(token));
  }
  if (config.flags.empty()) {
    throw std::invalid_argument("--u: at least one flag value is required");
  }
  return config;
}

void run_config(const yiarq::harness::ExperimentConfig& config,
                const std::string& out) {
  config.validate();
  if (out.empty()) {
    const auto rows = yiarq::harness::run_sweep(config);
    yiarq::harness::write_csv(std::cout, config, rows);
  } else {
    yiarq::harness::run_sweep_to_file(config, out);
  }
}

void run_coeffs(const std::string& code_text, int kmax) {
  const auto spec = yiarq::convcode::CodeSpec::from_octal(code_text);
  const auto trellis = yiarq::convcode::build_trellis(spec);
  const auto coeffs =
      yiarq::convcode::compute_transfer_coefficients(trellis, kmax);
  std::cout << "code: " << spec.to_octal() << "\n";
  std::cout << "d_f: " << coeffs.d_f << "\n";
  std::cout << "k,a_k,c_k\n";
  for (int k = coeffs.d_f; k <= coeffs.k_max; ++k) {
    std::cout << k << "," << coeffs.a[static_cast<std::size_t>(k)] << ","
              << coeffs.c[static_cast<std::size_t>(k)] << "\n";
  }
}

void run_exponents(const SweepOptions& sweep) {
  const auto config = make_config(sweep);
  config.validate();
  const auto trellis = yiarq::convcode::build_trellis(config.code);
  const int d_f = yiarq::convcode::free_distance(trellis);

  std::ofstream file;
  if (!sweep.out.empty()) {
    file.open(sweep.out, std::ios::binary);
    if (!file) {
      throw std::runtime_error("cannot open output file: " + sweep.out);
    }
  }
  std::ostream& os = sweep.out.empty() ? std::cout : file;

  os << "ebno_db,gamma,sigma2,u,h_tilde,ebno_slope,gamma_exponent_pb,"
        "gamma_exponent_px\n";
  for (double db : config.ebno_db) {
    const double ec = yiarq::channel::ebno_to_ecno(
        std::pow(10.0, db / 10.0), config.H, config.code.m,
        config.code.rate());
    for (double gamma : config.gammas) {
      for (double sigma2 : config.sigma2s) {
        for (const auto& flag : config.flags) {
          const double u = flag.resolve(ec, d_f);
          const auto params =
              yiarq::bounds::BoundParams::from_gamma(ec, u, d_f, gamma, sigma2);
          const auto pred = yiarq::bounds::exponent_predictions(params);
          os << format_double(db) << "," << format_double(gamma) << ","
             << format_double(sigma2) << "," << format_double(u) << ","
             << format_double(yiarq::bounds::h_tilde(u, params)) << ","
             << format_double(pred.ebno_slope) << ","
             << format_double(pred.gamma_exponent_pb) << ","
             << format_double(pred.gamma_exponent_px
                                  ? *pred.gamma_exponent_px
                                  : std::nan(""))
             << "\n";
        }
      }
    }
  }
  if (!sweep.out.empty() && !file) {
    throw std::runtime_error("write failed: " + sweep.out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Union bounds and Monte-Carlo simulation for Viterbi decoding with a "
      "one-bit retransmission flag on interleaved Rician fading channels"};
  app.require_subcommand(1);
  app.set_version_flag("--version", yiarq::harness::kVersion);

  SweepOptions bound_opt;
  auto* bound = app.add_subcommand(
      "bound", "Evaluate the analytical union bounds over a parameter grid");
  add_sweep_options(*bound, bound_opt);

  SweepOptions sim_opt;
  SimulateOptions sim_extra;
  auto* simulate = app.add_subcommand(
      "simulate", "Monte-Carlo error estimates alongside the bounds");
  add_sweep_options(*simulate, sim_opt);
  simulate->add_option("--trials", sim_extra.trials, "Frames per grid cell")
      ->capture_default_str();
  simulate->add_option("--seed", sim_extra.seed, "Base RNG seed")
      ->capture_default_str();
  simulate
      ->add_option("--fading", sim_extra.fading,
                   "Fading mode: iid or block-interleaved")
      ->capture_default_str();
  simulate->add_option("--threads", sim_extra.threads, "Worker threads")
      ->capture_default_str();
  simulate->add_option(
      "--stop-events", sim_extra.stop_events,
      "Stop a cell once this many frames hit bit errors (trials is the cap)");

  std::string coeffs_code = "5,7";
  int coeffs_kmax = 20;
  auto* coeffs = app.add_subcommand(
      "coeffs", "Print the transfer function coefficient table");
  coeffs->add_option("--code", coeffs_code, "Generator polynomials, octal")
      ->capture_default_str();
  coeffs->add_option("--kmax", coeffs_kmax, "Largest output weight to tabulate")
      ->capture_default_str();

  SweepOptions exp_opt;
  auto* exponents = app.add_subcommand(
      "exponents", "Predicted decay exponents per grid cell");
  add_sweep_options(*exponents, exp_opt);

  try {
    app.parse(argc, argv);

    if (bound->parsed()) {
      auto config = make_config(bound_opt);
      config.trials = 0;
      run_config(config, bound_opt.out);
    } else if (simulate->parsed()) {
      auto config = make_config(sim_opt);
      config.trials = sim_extra.trials;
      config.seed = sim_extra.seed;
      config.fading = yiarq::channel::parse_fading_mode(sim_extra.fading);
      config.threads = sim_extra.threads;
      config.stop_events = sim_extra.stop_events;
      run_config(config, sim_opt.out);
    } else if (coeffs->parsed()) {
      run_coeffs(coeffs_code, coeffs_kmax);
    } else if (exponents->parsed()) {
      run_exponents(exp_opt);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
