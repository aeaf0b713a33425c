// Copyright 2026 The qst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qst: tune transfer protocols, compute fidelity distributions, certify the
// library against the full-Hilbert oracle.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qst/qst.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string protocol;
  int n_sites = 0;
  std::string scenario;
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> mc_samples;
  std::optional<std::size_t> bins;
  std::optional<std::size_t> grid;
  std::string out;
  std::string aux;
  std::vector<double> window;
  unsigned threads = 0;
  bool wall_time = false;
};

void add_common(CLI::App *cmd, CommonFlags &f) {
  cmd->add_option("--config", f.config, "JSON experiment config; flags override its values");
  cmd->add_option("--protocol", f.protocol, "weak[:J0] | barrier[:h0] | perfect");
  cmd->add_option("--n-sites", f.n_sites, "Chain length N");
  cmd->add_option("--scenario", f.scenario, "one_qubit_vacuum | one_qubit_uniform | two_qubit");
  cmd->add_option("--mode", f.mode,
                  "at_optimal | timing_error[:f] | jitter[:f] | target_avg:value");
  cmd->add_option("--seed", f.seed, "Monte Carlo seed");
  cmd->add_option("--mc-samples", f.mc_samples, "Monte Carlo samples (0: analytic only)");
  cmd->add_option("--bins", f.bins, "Histogram bins");
  cmd->add_option("--grid", f.grid, "Time-scan grid points");
  cmd->add_option("--window", f.window, "Time-scan window lo hi")->expected(2);
  cmd->add_option("--out", f.out, "Output directory (default $QST_OUTPUT_DIR or ./qst_out)");
  cmd->add_option("--aux", f.aux, "Auxiliary field: on | off | auto")
      ->check(CLI::IsMember({"on", "off", "auto"}));
  cmd->add_option("--threads", f.threads, "Sampling threads (0: all cores)");
  cmd->add_flag("--wall-time", f.wall_time, "Record wall time in result.json (not reproducible)");
}

qst::ExperimentConfig resolve(const CommonFlags &f) {
  qst::ExperimentConfig c = f.config.empty() ? qst::ExperimentConfig{} : qst::load_config(f.config);
  if (!f.protocol.empty()) c.protocol = qst::parse_protocol(f.protocol);
  if (f.n_sites != 0) c.n_sites = f.n_sites;
  if (!f.scenario.empty()) c.scenario = qst::parse_scenario(f.scenario);
  if (!f.mode.empty()) c.mode = qst::parse_mode(f.mode);
  if (f.seed) c.seed = *f.seed;
  if (f.mc_samples) c.mc_samples = *f.mc_samples;
  if (f.bins) c.bins = *f.bins;
  if (f.grid) c.grid = *f.grid;
  if (f.window.size() == 2) c.window = qst::TimeWindow{f.window[0], f.window[1]};
  if (!f.out.empty()) c.output_dir = f.out;
  if (f.aux == "on") c.aux_field = true;
  if (f.aux == "off") c.aux_field = false;
  if (f.aux == "auto") c.aux_field.reset();
  c.threads = f.threads;
  c.record_wall_time = f.wall_time;
  return c;
}

int run_tune(const CommonFlags &f) {
  const qst::ExperimentConfig c = resolve(f);
  const qst::Json j = qst::cmd_tune(c);
  const std::filesystem::path dir = qst::resolve_output_dir(c);
  std::filesystem::create_directories(dir);
  qst::write_text(dir / "tune.json", j.dump(2) + "\n");
  std::printf("t_opt %.10g  <F> %.10g  (no aux field)\n", j["aux_off"]["t_opt"].get<double>(),
              j["aux_off"]["avg_fidelity"].get<double>());
  std::printf("t_opt %.10g  <F> %.10g  b_aux %.10g\n", j["aux_on"]["t_opt"].get<double>(),
              j["aux_on"]["avg_fidelity"].get<double>(), j["aux_on"]["b_aux"].get<double>());
  return 0;
}

int run_pdf(const CommonFlags &f) {
  const qst::ExperimentConfig c = resolve(f);
  const qst::RunResult r = qst::cmd_pdf(c);
  const auto &rec = r.record;
  std::printf("t_readout %.10g  <F> %.10g  support [%.10g, %.10g]\n",
              rec["t_readout"].get<double>(), rec["avg_fidelity"].get<double>(),
              rec["f_min"].get<double>(), rec["f_max"].get<double>());
  if (r.ks) std::printf("KS distance vs Monte Carlo: %.3g\n", *r.ks);
  for (const auto &p : r.files) std::printf("wrote %s\n", p.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Spin-chain quantum state transfer: fidelity distributions and certification"};
  app.require_subcommand(1);

  CommonFlags tune_flags, pdf_flags;
  auto *tune = app.add_subcommand("tune", "Find t_opt with and without the auxiliary field");
  add_common(tune, tune_flags);
  auto *pdf = app.add_subcommand("pdf", "Analytic fidelity pdf, MC histogram, result record");
  add_common(pdf, pdf_flags);

  qst::CertifyOptions cert;
  std::string corrupt = "none";
  std::string cert_out;
  auto *certify = app.add_subcommand("certify", "Oracle equivalence and invariant checks");
  certify->add_option("--n-max", cert.n_max, "Largest chain checked (<= 12)");
  certify->add_option("--times", cert.times, "Random times per chain");
  certify->add_option("--seed", cert.seed, "Seed for the random times and inputs");
  certify->add_option("--corrupt", corrupt, "Inject a defect: none | sign | scale");
  certify->add_option("--out", cert_out, "Write the JSON report here (default: stdout)");

  std::string amp_protocol = "perfect";
  int amp_n = 6, amp_q = 1;
  double amp_t = 0.0;
  std::string amp_out;
  auto *amps = app.add_subcommand("amplitudes", "Dump a_i^j(t) or b(t) as CSV");
  amps->add_option("--protocol", amp_protocol, "weak[:J0] | barrier[:h0] | perfect");
  amps->add_option("--n-sites", amp_n, "Chain length N");
  amps->add_option("--time", amp_t, "Time t")->required();
  amps->add_option("--sector", amp_q, "Excitation number 1 or 2")->check(CLI::IsMember({1, 2}));
  amps->add_option("--out", amp_out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*tune) return run_tune(tune_flags);
    if (*pdf) return run_pdf(pdf_flags);
    if (*certify) {
      cert.corruption = qst::parse_corruption(corrupt);
      const qst::CertifyReport rep = qst::cmd_certify(cert);
      const std::string text = rep.json(cert).dump(2) + "\n";
      if (cert_out.empty()) {
        std::cout << text;
      } else {
        qst::write_text(cert_out, text);
      }
      if (!rep.passed()) {
        std::cerr << "certification failed\n";
        return qst::CertificationError("").exit_code();
      }
      return 0;
    }
    if (*amps) {
      const qst::ChainSpec spec = qst::protocol_preset(qst::parse_protocol(amp_protocol), amp_n);
      const std::string csv = qst::amplitudes_csv(qst::amplitudes_at(spec, amp_t), amp_q);
      if (amp_out.empty()) {
        std::cout << csv;
      } else {
        qst::write_text(amp_out, csv);
      }
      return 0;
    }
  } catch (const qst::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
