// Copyright 2026 The twinsep Authors
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

// twinsep command-line front end. Talks to the library only through the C
// API in twinsep/twinsep.h.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "twinsep/twinsep.h"

namespace {

using json = nlohmann::json;

// Thrown to leave a subcommand with a given exit code.
struct ExitError {
  int code;
  std::string message;
};

void check(twinsep_status st) {
  if (st != TWINSEP_OK) throw ExitError{static_cast<int>(st), twinsep_last_error()};
}

[[noreturn]] void usage_error(const std::string& msg) { throw ExitError{2, msg}; }

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using ReportPtr = std::unique_ptr<twinsep_sieve_report, Deleter<twinsep_sieve_report, twinsep_sieve_report_free>>;
using SpectrumPtr = std::unique_ptr<twinsep_spectrum, Deleter<twinsep_spectrum, twinsep_spectrum_free>>;
using TablePtr = std::unique_ptr<twinsep_count_table, Deleter<twinsep_count_table, twinsep_count_table_free>>;
using FitPtr = std::unique_ptr<twinsep_fit, Deleter<twinsep_fit, twinsep_fit_free>>;
using FiguresPtr = std::unique_ptr<twinsep_figures, Deleter<twinsep_figures, twinsep_figures_free>>;

struct BufferFree {
  void operator()(void* p) const { twinsep_buffer_free(p); }
};

twinsep_s0_convention parse_convention(const std::string& name) {
  if (name == "raw") return TWINSEP_S0_RAW;
  if (name == "paper" || name == "paper_offset") return TWINSEP_S0_PAPER_OFFSET;
  if (name == "exact" || name == "interval_exact") return TWINSEP_S0_INTERVAL_EXACT;
  usage_error("unknown convention '" + name + "' (raw|paper|exact)");
}

const char* convention_name(twinsep_s0_convention c) {
  switch (c) {
    case TWINSEP_S0_RAW: return "raw";
    case TWINSEP_S0_PAPER_OFFSET: return "paper_offset";
    case TWINSEP_S0_INTERVAL_EXACT: return "interval_exact";
  }
  return "raw";
}

std::vector<twinsep_count_record> table_rows(const twinsep_count_table* table) {
  std::vector<twinsep_count_record> rows(twinsep_count_table_len(table));
  for (size_t i = 0; i < rows.size(); ++i) check(twinsep_count_table_at(table, i, &rows[i]));
  return rows;
}

std::vector<uint32_t> read_separations(const std::string& path) {
  uint32_t* raw = nullptr;
  size_t len = 0;
  check(twinsep_read_separations(path.c_str(), &raw, &len));
  std::unique_ptr<uint32_t, BufferFree> owned(raw);
  return {raw, raw + len};
}

std::vector<twinsep_onset> read_onsets(const std::string& path) {
  twinsep_onset* raw = nullptr;
  size_t len = 0;
  check(twinsep_read_onsets(path.c_str(), &raw, &len));
  std::unique_ptr<twinsep_onset, BufferFree> owned(raw);
  return {raw, raw + len};
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ExitError{4, "cannot open '" + path + "' for writing"};
  return out;
}

// Two numeric columns of a small CSV, located by header name.
struct Columns {
  std::vector<double> a;
  std::vector<double> b;
};

Columns read_two_columns(const std::string& path, const std::string& col_a,
                         const std::string& col_b) {
  std::ifstream in(path);
  if (!in) throw ExitError{4, "cannot open '" + path + "' for reading"};
  std::string line;
  std::vector<std::string> header;
  int ia = -1;
  int ib = -1;
  Columns out;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (header.empty()) {
      header = cells;
      for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == col_a) ia = static_cast<int>(i);
        if (header[i] == col_b) ib = static_cast<int>(i);
      }
      if (ia < 0 || ib < 0) usage_error(path + ": needs columns " + col_a + "," + col_b);
      continue;
    }
    try {
      out.a.push_back(std::stod(cells.at(static_cast<size_t>(ia))));
      out.b.push_back(std::stod(cells.at(static_cast<size_t>(ib))));
    } catch (const std::exception&) {
      usage_error(path + ":" + std::to_string(line_no) + ": malformed row");
    }
  }
  return out;
}

bool has_header_column(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw ExitError{4, "cannot open '" + path + "' for reading"};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      if (cell == name) return true;
    }
    return false;
  }
  return false;
}

json fit_to_json(const twinsep_fit* fit) {
  static const char* kNames[] = {"exp_slope", "m0_law", "s0_linear", "s0_loglog"};
  json j;
  j["model"] = kNames[twinsep_fit_model(fit)];
  std::vector<double> coef;
  std::vector<double> err;
  for (size_t i = 0; i < twinsep_fit_coefficient_len(fit); ++i) {
    double c = 0;
    double e = 0;
    check(twinsep_fit_coefficient(fit, i, &c, &e));
    coef.push_back(c);
    err.push_back(e);
  }
  j["coefficients"] = coef;
  j["std_errors"] = err;
  double rms = 0;
  size_t n = 0;
  int ill = 0;
  double cond = 0;
  twinsep_fit_summary(fit, &rms, &n, &ill, &cond);
  j["residual_rms"] = rms;
  j["n_points"] = n;
  j["ill_conditioned"] = ill != 0;
  j["condition_number"] = cond;
  const size_t nd = twinsep_fit_range_deltas(fit, nullptr, 0);
  if (nd != 0) {
    std::vector<double> d(nd);
    twinsep_fit_range_deltas(fit, d.data(), d.size());
    j["range_deltas"] = d;
  }
  j["metadata"] = {{"log_base", "natural"}, {"weighting", "equal"}};
  return j;
}

twinsep_model_params model_from_flags(double s0, double f, uint64_t pi2, bool have_pi2) {
  twinsep_model_params params{};
  if (f > 0) {
    if (!have_pi2) usage_error("--pi2 is required when --f > 0");
    check(twinsep_solve_approx(s0, pi2, f, &params));
  } else {
    check(twinsep_solve_f0(s0, &params));
  }
  return params;
}

std::string metadata_line(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string s = "# metadata:";
  for (size_t i = 0; i < kv.size(); ++i) s += (i == 0 ? " " : ",") + kv[i].first + "=" + kv[i].second;
  return s;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twin prime separation statistics"};
  app.require_subcommand(1);

  // sieve
  auto* sieve = app.add_subcommand("sieve", "Count primes and twins, record separations");
  uint64_t limit = 0;
  uint64_t segment = 0;
  std::string checkpoints = "geometric:20";
  unsigned workers = 0;
  std::string counts_out;
  std::string seps_out;
  std::string onsets_out;
  sieve->add_option("--limit", limit, "Inclusive upper bound N")->required()->envname("TWINSEP_LIMIT");
  sieve->add_option("--segment-size", segment, "Odd-number flags per segment")->envname("TWINSEP_SEGMENT_SIZE");
  sieve->add_option("--checkpoints", checkpoints, "geometric:<k> or list:<n,...>")
      ->envname("TWINSEP_CHECKPOINTS")->capture_default_str();
  sieve->add_option("--workers", workers, "Sieve threads (0 = all cores)")->envname("TWINSEP_WORKERS");
  sieve->add_option("--out", counts_out, "counts.csv")->required();
  sieve->add_option("--separations", seps_out, "seps.bin (little-endian uint32)");
  sieve->add_option("--onsets", onsets_out, "onsets.csv (record separations)");

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "Histogram a separation stream");
  std::string seps_in;
  std::string spectrum_out;
  spectrum->add_option("--separations", seps_in)->required();
  spectrum->add_option("--out", spectrum_out)->required();

  // s0
  auto* s0cmd = app.add_subcommand("s0", "Average separation per checkpoint");
  std::string counts_in;
  std::string convention = "raw";
  std::string spectrum_in;
  std::string s0_out;
  s0cmd->add_option("--counts", counts_in)->required();
  s0cmd->add_option("--convention", convention, "raw|paper|exact")->envname("TWINSEP_CONVENTION")->capture_default_str();
  s0cmd->add_option("--spectrum", spectrum_in, "spectrum.csv for the exact convention (last row)");
  s0cmd->add_option("--out", s0_out, "output CSV (default stdout)");

  // fit
  auto* fitcmd = app.add_subcommand("fit", "Least-squares fits");
  std::string kind;
  std::string fit_in;
  std::string fit_out;
  fitcmd->add_option("--kind", kind, "slope|m0|s0lin|s0loglog")->required()
      ->check(CLI::IsMember({"slope", "m0", "s0lin", "s0loglog"}));
  fitcmd->add_option("--in", fit_in, "spectrum.csv (slope), pi1,m (m0), pi1,s0 or counts.csv (s0*)")->required();
  fitcmd->add_option("--out", fit_out, "fit.json")->required();
  fitcmd->add_option("--convention", convention, "s0 convention when --in is a counts table")->envname("TWINSEP_CONVENTION");

  // predict
  auto* predictcmd = app.add_subcommand("predict", "Cutoff L per checkpoint");
  double f = 1.0;
  std::string predict_out;
  predictcmd->add_option("--counts", counts_in)->required();
  predictcmd->add_option("--f", f, "Risk factor")
      ->envname("TWINSEP_F")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  predictcmd->add_option("--convention", convention)->envname("TWINSEP_CONVENTION")->capture_default_str();
  predictcmd->add_option("--out", predict_out, "lmax.csv")->required();

  // simulate
  auto* simcmd = app.add_subcommand("simulate", "Draw synthetic separations from the model");
  double s0 = 0;
  uint64_t pi2 = 0;
  double sim_f = 0.0;
  uint64_t n_events = 0;
  uint64_t seed = 0;
  std::string sim_out;
  std::string sim_seps;
  simcmd->add_option("--s0", s0)->required();
  auto* sim_pi2 = simcmd->add_option("--pi2", pi2);
  simcmd->add_option("--f", sim_f, "Risk factor (0 = no cutoff)")->capture_default_str();
  simcmd->add_option("--n", n_events, "Number of events")->required();
  simcmd->add_option("--seed", seed)->envname("TWINSEP_SEED")->capture_default_str();
  simcmd->add_option("--out", sim_out, "synth.csv (spectrum s,count)")->required();
  simcmd->add_option("--separations", sim_seps, "raw draws as uint32 .bin");

  // gof
  auto* gofcmd = app.add_subcommand("gof", "Compare a spectrum with the model");
  double alpha = 0.01;
  double gof_f = 0.0;
  std::string gof_out;
  gofcmd->add_option("--spectrum", spectrum_in)->required();
  gofcmd->add_option("--s0", s0)->required();
  auto* gof_pi2 = gofcmd->add_option("--pi2", pi2);
  gofcmd->add_option("--f", gof_f)->capture_default_str();
  gofcmd->add_option("--alpha", alpha)->envname("TWINSEP_ALPHA")->capture_default_str();
  gofcmd->add_option("--out", gof_out, "report.json (default stdout)");

  // figures
  auto* figcmd = app.add_subcommand("figures", "Plot-ready datasets fig1..fig3");
  std::string out_dir;
  std::string onsets_in;
  uint64_t fig_limit = 0;
  figcmd->add_option("--counts", counts_in, "counts.csv (sieved or external)");
  figcmd->add_option("--separations", seps_in, "seps.bin matching the counts");
  figcmd->add_option("--onsets", onsets_in, "onsets.csv");
  figcmd->add_option("--limit", fig_limit, "sieve to this bound instead of reading files");
  figcmd->add_option("--f", f)->envname("TWINSEP_F")->check(CLI::PositiveNumber)->capture_default_str();
  figcmd->add_option("--convention", convention)->envname("TWINSEP_CONVENTION")->capture_default_str();
  figcmd->add_option("--out-dir", out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sieve) {
      size_t len = 0;
      check(twinsep_checkpoint_grid(checkpoints.c_str(), limit, nullptr, 0, &len));
      std::vector<uint64_t> grid(len);
      check(twinsep_checkpoint_grid(checkpoints.c_str(), limit, grid.data(), grid.size(), &len));
      const twinsep_sieve_config cfg{limit, segment, grid.data(), grid.size(), workers};
      twinsep_sieve_report* raw = nullptr;
      check(twinsep_sieve_run(&cfg, &raw));
      ReportPtr report(raw);
      twinsep_count_table* table_raw = nullptr;
      check(twinsep_sieve_report_counts(report.get(), &table_raw));
      TablePtr table(table_raw);
      const std::string grid_kind = checkpoints.rfind("list", 0) == 0 ? "list" : checkpoints;
      check(twinsep_count_table_set_metadata(table.get(), "checkpoints", grid_kind.c_str()));
      check(twinsep_count_table_save(table.get(), counts_out.c_str()));
      size_t n_seps = 0;
      const uint32_t* seps = twinsep_sieve_report_separations(report.get(), &n_seps);
      if (!seps_out.empty()) check(twinsep_write_separations(seps_out.c_str(), seps, n_seps));
      if (!onsets_out.empty()) {
        std::vector<twinsep_onset> onsets(twinsep_sieve_report_onset_len(report.get()));
        for (size_t i = 0; i < onsets.size(); ++i) check(twinsep_sieve_report_onset_at(report.get(), i, &onsets[i]));
        check(twinsep_write_onsets(onsets_out.c_str(), onsets.data(), onsets.size()));
      }
      const size_t rows = twinsep_sieve_report_count_len(report.get());
      std::cerr << "sieved to " << limit << ": " << rows << " checkpoints, " << n_seps
                << " separations\n";
    } else if (*spectrum) {
      const auto seps = read_separations(seps_in);
      twinsep_spectrum* raw = nullptr;
      check(twinsep_spectrum_from_separations(seps.data(), seps.size(), &raw));
      SpectrumPtr spec(raw);
      check(twinsep_spectrum_save(spec.get(), spectrum_out.c_str(), "source=sieved"));
    } else if (*s0cmd) {
      const twinsep_s0_convention conv = parse_convention(convention);
      twinsep_count_table* raw = nullptr;
      check(twinsep_count_table_load(counts_in.c_str(), &raw));
      TablePtr table(raw);
      SpectrumPtr spec;
      if (!spectrum_in.empty()) {
        twinsep_spectrum* s = nullptr;
        check(twinsep_spectrum_load(spectrum_in.c_str(), &s));
        spec.reset(s);
      }
      std::ofstream file;
      if (!s0_out.empty()) file = open_out(s0_out);
      std::ostream& out = s0_out.empty() ? std::cout : file;
      out << metadata_line({{"s0_convention", convention_name(conv)}}) << "\nn,s0\n";
      const auto rows = table_rows(table.get());
      for (size_t i = 0; i < rows.size(); ++i) {
        // A spectrum describes the whole run, so it only applies to the last row.
        const twinsep_spectrum* use = (spec && i + 1 == rows.size()) ? spec.get() : nullptr;
        double v = 0;
        if (twinsep_s0_from_counts(&rows[i], conv, use, &v) != TWINSEP_OK) continue;
        out << rows[i].n << ',' << fmt(v) << '\n';
      }
    } else if (*fitcmd) {
      twinsep_fit* raw = nullptr;
      if (kind == "slope") {
        twinsep_spectrum* s = nullptr;
        check(twinsep_spectrum_load(fit_in.c_str(), &s));
        SpectrumPtr spec(s);
        check(twinsep_fit_spectrum_slope(spec.get(), &raw));
      } else if (kind == "m0") {
        const Columns c = read_two_columns(fit_in, "pi1", "m");
        check(twinsep_fit_points(TWINSEP_FIT_M0, c.a.data(), c.b.data(), c.a.size(), &raw));
      } else {
        std::vector<double> x;
        std::vector<double> y;
        if (has_header_column(fit_in, "pi2")) {
          const twinsep_s0_convention conv = parse_convention(convention);
          twinsep_count_table* t = nullptr;
          check(twinsep_count_table_load(fit_in.c_str(), &t));
          TablePtr table(t);
          for (const auto& r : table_rows(table.get())) {
            double v = 0;
            if (twinsep_s0_from_counts(&r, conv, nullptr, &v) != TWINSEP_OK || !(v > 0)) continue;
            x.push_back(static_cast<double>(r.pi1));
            y.push_back(v);
          }
        } else {
          const Columns c = read_two_columns(fit_in, "pi1", "s0");
          x = c.a;
          y = c.b;
        }
        const twinsep_fit_kind k = kind == "s0lin" ? TWINSEP_FIT_S0_LINEAR : TWINSEP_FIT_S0_LOGLOG;
        check(twinsep_fit_points(k, x.data(), y.data(), x.size(), &raw));
      }
      FitPtr fit(raw);
      auto out = open_out(fit_out);
      out << fit_to_json(fit.get()).dump(2) << '\n';
    } else if (*predictcmd) {
      const twinsep_s0_convention conv = parse_convention(convention);
      twinsep_count_table* raw = nullptr;
      check(twinsep_count_table_load(counts_in.c_str(), &raw));
      TablePtr table(raw);
      auto out = open_out(predict_out);
      out << metadata_line({{"log_base", "natural"}, {"s0_convention", convention_name(conv)}, {"f", fmt(f)}})
          << "\nn,log_n,s0,sbar,a,l_cut,l_ceil\n";
      size_t skipped = 0;
      for (const auto& r : table_rows(table.get())) {
        double v = 0;
        twinsep_model_params p{};
        if (twinsep_predict(&r, f, conv, &v, &p) != TWINSEP_OK) {
          ++skipped;
          continue;
        }
        out << r.n << ',' << fmt(std::log(static_cast<double>(r.n))) << ',' << fmt(v) << ','
            << fmt(p.sbar) << ',' << fmt(p.a) << ',' << fmt(p.l_cut) << ','
            << static_cast<long long>(std::ceil(p.l_cut)) << '\n';
      }
      if (skipped != 0) std::cerr << "skipped " << skipped << " rows with too few twins\n";
    } else if (*simcmd) {
      const twinsep_model_params params = model_from_flags(s0, sim_f, pi2, sim_pi2->count() > 0);
      std::vector<uint32_t> draws(n_events);
      check(twinsep_sample_separations(&params, n_events, seed, draws.data()));
      twinsep_spectrum* raw = nullptr;
      check(twinsep_spectrum_from_separations(draws.data(), draws.size(), &raw));
      SpectrumPtr spec(raw);
      const std::string meta = std::string("source=simulated,generator=") + twinsep_generator_name() +
                               ",seed=" + std::to_string(seed) + ",s0=" + fmt(s0) + ",f=" + fmt(sim_f);
      check(twinsep_spectrum_save(spec.get(), sim_out.c_str(), meta.c_str()));
      if (!sim_seps.empty()) check(twinsep_write_separations(sim_seps.c_str(), draws.data(), draws.size()));
    } else if (*gofcmd) {
      const twinsep_model_params params = model_from_flags(s0, gof_f, pi2, gof_pi2->count() > 0);
      twinsep_spectrum* raw = nullptr;
      check(twinsep_spectrum_load(spectrum_in.c_str(), &raw));
      SpectrumPtr spec(raw);
      twinsep_gof_report r{};
      check(twinsep_gof_compare(spec.get(), &params, alpha, &r));
      json j = {{"chi2", r.chi2}, {"dof", r.dof}, {"critical_value", r.critical_value},
                {"ks_distance", r.ks_distance}, {"alpha", r.alpha}, {"pass", r.pass != 0},
                {"pooling_min_expected", 5},
                {"note", "alpha and the pooling threshold are tool defaults"}};
      if (gof_out.empty()) {
        std::cout << j.dump(2) << '\n';
      } else {
        auto out = open_out(gof_out);
        out << j.dump(2) << '\n';
      }
    } else if (*figcmd) {
      const twinsep_s0_convention conv = parse_convention(convention);
      TablePtr table;
      std::vector<uint32_t> seps;
      std::vector<twinsep_onset> onsets;
      bool have_seps = false;
      if (fig_limit != 0) {
        size_t len = 0;
        check(twinsep_checkpoint_grid("geometric:20", fig_limit, nullptr, 0, &len));
        std::vector<uint64_t> grid(len);
        check(twinsep_checkpoint_grid("geometric:20", fig_limit, grid.data(), grid.size(), &len));
        const twinsep_sieve_config cfg{fig_limit, 0, grid.data(), grid.size(), 0};
        twinsep_sieve_report* rraw = nullptr;
        check(twinsep_sieve_run(&cfg, &rraw));
        ReportPtr report(rraw);
        twinsep_count_table* t = nullptr;
        check(twinsep_sieve_report_counts(report.get(), &t));
        table.reset(t);
        size_t n = 0;
        const uint32_t* s = twinsep_sieve_report_separations(report.get(), &n);
        seps.assign(s, s + n);
        have_seps = true;
        onsets.resize(twinsep_sieve_report_onset_len(report.get()));
        for (size_t i = 0; i < onsets.size(); ++i) check(twinsep_sieve_report_onset_at(report.get(), i, &onsets[i]));
      } else {
        if (counts_in.empty()) usage_error("figures needs --counts or --limit");
        twinsep_count_table* t = nullptr;
        check(twinsep_count_table_load(counts_in.c_str(), &t));
        table.reset(t);
        if (!seps_in.empty()) {
          seps = read_separations(seps_in);
          have_seps = true;
        }
        if (!onsets_in.empty()) onsets = read_onsets(onsets_in);
      }
      twinsep_figures* fraw = nullptr;
      check(twinsep_figures_run(table.get(), have_seps ? seps.data() : nullptr, seps.size(),
                                onsets.empty() ? nullptr : onsets.data(), onsets.size(), f, conv, &fraw));
      FiguresPtr figs(fraw);
      check(twinsep_figures_write(figs.get(), out_dir.c_str()));
    }
  } catch (const ExitError& e) {
    std::cerr << "twinsep: " << e.message << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "twinsep: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
