// saskit: simulate correlated Stokes/anti-Stokes photon pair experiments,
// build coincidence histograms, and fit the spectral/spatial/scaling models.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sas/coincidence.hpp"
#include "sas/config.hpp"
#include "sas/constants.hpp"
#include "sas/csv.hpp"
#include "sas/errors.hpp"
#include "sas/event_io.hpp"
#include "sas/fitting.hpp"
#include "sas/montecarlo.hpp"
#include "sas/physics.hpp"
#include "sas/spatial.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOpts {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::string format = "csv";
};

fs::path ensure_dir(const fs::path& dir) {
  if (!dir.empty()) fs::create_directories(dir);
  return dir;
}

fs::path pick_outdir(const GlobalOpts& g, const fs::path& config_default) {
  return ensure_dir(g.output_dir ? fs::path(*g.output_dir) : config_default);
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw sas::data_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw sas::data_error("cannot open " + path.string() + " for writing");
  out << std::setprecision(12);
  return out;
}

json parameters_json(const sas::FitResult& fr) {
  json params = json::array();
  for (const auto& p : fr.parameters) {
    params.push_back({{"name", p.name},
                      {"value", p.value},
                      {"stderr", p.stderr_},
                      {"identifiable", p.identifiable}});
  }
  return params;
}

void print_fit(const sas::FitResult& fr) {
  for (const auto& p : fr.parameters) {
    std::cout << "  " << p.name << " = " << p.value << " +/- " << p.stderr_
              << (p.identifiable ? "" : "  (unidentifiable)") << '\n';
  }
  std::cout << "  residual_norm = " << fr.residual_norm << ", n_points = " << fr.n_points
            << ", converged = " << (fr.converged ? "yes" : "no") << '\n';
}

// ---------------------------------------------------------------- simulate

void run_simulate(const GlobalOpts& g, const std::string& config_path, unsigned threads) {
  sas::ExperimentConfig cfg = sas::load_config(config_path);
  if (g.seed) cfg.simulation.seed = *g.seed;

  const sas::ChannelProbabilities probs = cfg.probabilities();
  const sas::EventStream stream =
      sas::simulate(probs, cfg.simulation.n_pulses, cfg.simulation.seed,
                    cfg.laser.rep_rate_hz, threads);

  const fs::path outdir = pick_outdir(g, cfg.output_dir);
  const bool binary = g.format == "bin";
  const fs::path events_path = outdir / (binary ? "events.bin" : "events.csv");
  sas::write_events_file(stream, events_path, binary);

  const double n = static_cast<double>(cfg.simulation.n_pulses);
  const double expect_s = n * (probs.p_pair + (1.0 - probs.p_pair) * probs.p_s);
  const double expect_as = n * (probs.p_pair + (1.0 - probs.p_pair) * probs.p_as);
  const auto observed_s = stream.count(sas::Channel::S);
  const auto observed_as = stream.count(sas::Channel::aS);

  json summary = {
      {"material", cfg.material.name},
      {"n_pulses", cfg.simulation.n_pulses},
      {"seed", cfg.simulation.seed},
      {"rep_rate_hz", cfg.laser.rep_rate_hz},
      {"alpha_l_sq", sas::photons_per_pulse(cfg.laser)},
      {"window_cm1", {cfg.simulation.window_lo_cm1, cfg.simulation.window_hi_cm1}},
      {"probabilities",
       {{"p_s", probs.p_s}, {"p_as", probs.p_as}, {"p_pair", probs.p_pair}}},
      {"expected_counts", {{"s", expect_s}, {"as", expect_as}}},
      {"observed_counts", {{"s", observed_s}, {"as", observed_as}}},
      {"events_file", events_path.string()},
  };
  write_json(outdir / "simulate_summary.json", summary);
  std::cout << "simulated " << cfg.simulation.n_pulses << " pulses, " << stream.records.size()
            << " events -> " << events_path.string() << '\n';
}

// ---------------------------------------------------------------- correlate

void run_correlate(const GlobalOpts& g, const std::string& input, int max_delay,
                   double rep_rate_mhz, std::uint64_t n_pulses_override) {
  sas::EventStream stream = sas::read_events_file(input);
  stream.rep_rate_hz = rep_rate_mhz * 1e6;
  if (n_pulses_override > 0) stream.n_pulses = n_pulses_override;
  stream.validate();

  const fs::path outdir = pick_outdir(g, ".");
  const sas::CoincidenceHistogram hist = sas::histogram(stream, max_delay);

  auto hist_csv = open_csv(outdir / "histogram.csv");
  hist_csv << "delay_pulses,counts\n";
  for (int d = -hist.max_delay; d <= hist.max_delay; ++d)
    hist_csv << d << ',' << hist.at(d) << '\n';

  json report = {
      {"input", std::string(input)},
      {"n_pulses", hist.n_pulses},
      {"max_delay", hist.max_delay},
      {"accumulation_time_s", hist.accumulation_time_s},
      {"total_s", hist.total_s},
      {"total_as", hist.total_as},
  };
  if (stream.records.empty()) {
    report["rate_zero_cps"] = 0.0;
    report["baseline_cps"] = 0.0;
    report["corr_rate_cps"] = 0.0;
    report["uncertainty_cps"] = 0.0;
    report["g2_zero"] = nullptr;
  } else {
    const sas::CorrelatedRateResult r = sas::extract_correlated_rate(hist);
    report["rate_zero_cps"] = r.rate_zero_cps;
    report["baseline_cps"] = r.baseline_cps;
    report["corr_rate_cps"] = r.corr_rate_cps;
    report["uncertainty_cps"] = r.uncertainty_cps;
    report["g2_zero"] = r.g2_zero;
    std::cout << "corr_rate = " << r.corr_rate_cps << " +/- " << r.uncertainty_cps
              << " counts/s, g2(0) = " << r.g2_zero << '\n';
  }
  write_json(outdir / "correlate_report.json", report);
}

// ---------------------------------------------------------------- fit

sas::FitResult fit_spectral(const sas::CsvTable& table, const sas::ExperimentConfig& cfg,
                            const fs::path& outdir) {
  const std::size_t shift_col = table.column("shift_cm1");
  const std::size_t rate_col = table.column("corr_rate_cps");
  const std::size_t unc_col = table.column("uncertainty_cps");
  sas::SpectralRateSeries series;
  series.laser = cfg.laser;
  series.collection = cfg.collection;
  for (const auto& row : table.rows) {
    series.points.push_back(
        {sas::parse_double(row.fields[shift_col], table.source, row.line, "shift_cm1"),
         sas::parse_double(row.fields[rate_col], table.source, row.line, "corr_rate_cps"),
         sas::parse_double(row.fields[unc_col], table.source, row.line, "uncertainty_cps")});
  }
  const sas::FitResult fr = sas::fit_step_constants(series, cfg.material);

  const double areas[2] = {cfg.material.stokes_area_1st, cfg.material.stokes_area_2nd};
  auto model_at = [&](double shift) {
    const sas::PotentialBand* band = cfg.material.band_containing(shift);
    if (!band) return 0.0;
    std::size_t b = static_cast<std::size_t>(band - cfg.material.bands.data());
    if (b >= fr.parameters.size() || !fr.parameters[b].identifiable) return 0.0;
    const double v0 = fr.parameters[b].value * areas[b];
    return sas::pair_rate(cfg.laser, v0, sas::delta_k(cfg.collection, *band));
  };

  auto curve = open_csv(outdir / "model_curve.csv");
  curve << "shift_cm1,model_rate_cps\n";
  const double hi = cfg.material.bands.back().shift_hi_cm1;
  const int kSteps = 400;
  for (int i = 0; i <= kSteps; ++i) {
    const double shift = -hi + 2.0 * hi * i / kSteps;
    curve << shift << ',' << model_at(shift) << '\n';
  }
  return fr;
}

sas::FitResult fit_aperture(const sas::CsvTable& table, int components,
                            const fs::path& outdir) {
  const std::size_t r_col = table.column("radius_mm");
  const std::size_t i_col = table.column("intensity");
  sas::ApertureCurve curve;
  curve.channel = sas::ApertureChannel::AS;
  for (const auto& row : table.rows) {
    curve.points.push_back(
        {sas::parse_double(row.fields[r_col], table.source, row.line, "radius_mm"),
         sas::parse_double(row.fields[i_col], table.source, row.line, "intensity")});
  }
  const auto [profile, fr] = sas::fit_profile(curve, components);

  auto model = open_csv(outdir / "model_curve.csv");
  model << "radius_mm,model_intensity\n";
  if (fr.converged) {
    const double rmax = 1.2 * curve.points.back().radius_mm;
    const int kSteps = 200;
    for (int i = 0; i <= kSteps; ++i) {
      const double r = rmax * i / kSteps;
      model << r << ',' << sas::transmitted_fraction(profile, r) << '\n';
    }
  }
  return fr;
}

sas::FitResult fit_power(const sas::CsvTable& table, const fs::path& outdir) {
  const std::size_t p_col = table.column("power_w");
  const std::size_t r_col = table.column("rate_cps");
  const std::size_t u_col = table.column("uncertainty_cps");
  std::vector<sas::PowerLawPoint> points;
  for (const auto& row : table.rows) {
    points.push_back(
        {sas::parse_double(row.fields[p_col], table.source, row.line, "power_w"),
         sas::parse_double(row.fields[r_col], table.source, row.line, "rate_cps"),
         sas::parse_double(row.fields[u_col], table.source, row.line, "uncertainty_cps")});
  }
  const sas::FitResult fr = sas::fit_power_law(points);

  const double a = fr.find("amplitude")->value;
  const double b = fr.find("exponent")->value;
  double pmin = points.front().power_w, pmax = points.front().power_w;
  for (const auto& p : points) {
    pmin = std::min(pmin, p.power_w);
    pmax = std::max(pmax, p.power_w);
  }
  auto model = open_csv(outdir / "model_curve.csv");
  model << "power_w,model_rate_cps\n";
  const int kSteps = 200;
  for (int i = 0; i <= kSteps; ++i) {
    const double p = pmin + (pmax - pmin) * i / kSteps;
    model << p << ',' << a * std::pow(p, b) << '\n';
  }
  return fr;
}

sas::FitResult fit_xsection(const sas::CsvTable& table, const fs::path& outdir) {
  const std::size_t x_col = table.column("area_sq");
  const std::size_t r_col = table.column("rate");
  const std::size_t u_col = table.column("uncertainty");
  std::vector<sas::CrossSectionPoint> points;
  for (const auto& row : table.rows) {
    points.push_back(
        {sas::parse_double(row.fields[x_col], table.source, row.line, "area_sq"),
         sas::parse_double(row.fields[r_col], table.source, row.line, "rate"),
         sas::parse_double(row.fields[u_col], table.source, row.line, "uncertainty")});
  }
  const sas::FitResult fr = sas::fit_cross_section_scaling(points);

  double xmax = 0.0;
  for (const auto& p : points) xmax = std::max(xmax, p.area_sq);
  const double slope = fr.find("slope")->value;
  auto model = open_csv(outdir / "model_curve.csv");
  model << "area_sq,model_rate\n";
  const int kSteps = 100;
  for (int i = 0; i <= kSteps; ++i) {
    const double x = xmax * i / kSteps;
    model << x << ',' << slope * x << '\n';
  }
  return fr;
}

void run_fit(const GlobalOpts& g, const std::string& kind, const std::string& input,
             const std::optional<std::string>& config_path, int components) {
  const fs::path outdir = pick_outdir(g, ".");
  const sas::CsvTable table = sas::read_csv_file(input);

  sas::FitResult fr;
  if (kind == "spectral") {
    if (!config_path)
      throw sas::data_error("--kind spectral needs --config for the laser and material model");
    const sas::ExperimentConfig cfg = sas::load_config(*config_path);
    fr = fit_spectral(table, cfg, outdir);
  } else if (kind == "aperture") {
    fr = fit_aperture(table, components, outdir);
  } else if (kind == "power") {
    fr = fit_power(table, outdir);
  } else {
    fr = fit_xsection(table, outdir);
  }

  json report = {
      {"kind", kind},
      {"input", std::string(input)},
      {"converged", fr.converged},
      {"n_points", fr.n_points},
      {"residual_norm", fr.residual_norm},
      {"parameters", parameters_json(fr)},
  };
  write_json(outdir / "fit_report.json", report);
  std::cout << kind << " fit:\n";
  print_fit(fr);
  if (!fr.converged)
    throw sas::convergence_error(kind + " fit did not converge; best parameters written to " +
                                 (outdir / "fit_report.json").string());
}

// ---------------------------------------------------------------- report

void run_report(const GlobalOpts& g, const std::string& config_path, double rate_cps,
                double enhancement) {
  const sas::ExperimentConfig cfg = sas::load_config(config_path);
  const fs::path outdir = pick_outdir(g, cfg.output_dir);

  const sas::PotentialBand& band1 = cfg.material.bands.front();
  const double dk = sas::delta_k(cfg.collection, band1);
  const double alpha2 = sas::photons_per_pulse(cfg.laser);
  const double delta = sas::interaction_amplitude_from_rate(rate_cps, dk, cfg.laser);
  const double v0 = delta / alpha2;
  const double incident_per_s = alpha2 * cfg.laser.rep_rate_hz;
  const double pairs_per_photon = rate_cps / incident_per_s;

  std::vector<std::pair<std::string, double>> rows = {
      {"pair_rate_cps", rate_cps},
      {"alpha_l_sq", alpha2},
      {"delta_k", dk},
      {"transition_amplitude_ev", delta},
      {"potential_v0_ev", v0},
      {"incident_photons_per_s", incident_per_s},
      {"pairs_per_incident_photon", pairs_per_photon},
  };
  if (enhancement > 0.0)
    rows.emplace_back("projected_amplitude_ev",
                      sas::project_enhancement(delta, enhancement));

  auto csv = open_csv(outdir / "report.csv");
  csv << "quantity,value\n";
  for (const auto& [k, v] : rows) csv << k << ',' << v << '\n';

  std::ofstream txt(outdir / "report.txt");
  txt << std::setprecision(6);
  txt << "correlated pair rate:        " << rate_cps << " counts/s\n";
  txt << "pump photons per pulse:      " << alpha2 << '\n';
  txt << "spectral collection dk:      " << dk << '\n';
  txt << "transition amplitude Delta:  " << delta << " eV (" << delta * 1e6 << " micro-eV)\n";
  txt << "potential scale V0:          " << v0 << " eV (" << v0 * 1e15 << " femto-eV)\n";
  txt << "incident photons per s:      " << incident_per_s << '\n';
  txt << "pairs per incident photon:   " << pairs_per_photon << '\n';
  if (enhancement > 0.0) {
    const double proj = sas::project_enhancement(delta, enhancement);
    txt << "Delta at x" << enhancement << " pair-rate enhancement: " << proj << " eV ("
        << proj * 1e3 << " milli-eV)\n";
  }

  std::ifstream echo(outdir / "report.txt");
  std::cout << echo.rdbuf();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stokes/anti-Stokes photon-pair simulation and analysis toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "override the RNG seed");
  app.add_option("--output-dir", g.output_dir, "directory for all output files");
  app.add_option("--format", g.format, "event-stream file format")
      ->check(CLI::IsMember({"csv", "bin"}));

  std::string sim_config;
  unsigned threads = 0;
  CLI::App* sim = app.add_subcommand("simulate", "generate a seeded event stream");
  sim->fallthrough();
  sim->add_option("--config", sim_config, "experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  sim->add_option("--threads", threads, "worker threads (0 = hardware)");

  std::string cor_input;
  int max_delay = 50;
  double rep_rate_mhz = 76.0;
  std::uint64_t n_pulses_override = 0;
  CLI::App* cor = app.add_subcommand("correlate", "histogram and correlated-rate extraction");
  cor->fallthrough();
  cor->add_option("--input", cor_input, "event-stream file (csv or bin)")
      ->required()
      ->check(CLI::ExistingFile);
  cor->add_option("--max-delay", max_delay, "histogram half-width in pulses")
      ->check(CLI::PositiveNumber);
  cor->add_option("--rep-rate-mhz", rep_rate_mhz, "laser repetition rate");
  cor->add_option("--n-pulses", n_pulses_override,
                  "total pulses in the run (default: last pulse + 1)");

  std::string fit_kind, fit_input;
  std::optional<std::string> fit_config;
  int components = 2;
  CLI::App* fit = app.add_subcommand("fit", "fit a model to a data csv");
  fit->fallthrough();
  fit->add_option("--kind", fit_kind, "spectral | aperture | power | xsection")
      ->required()
      ->check(CLI::IsMember({"spectral", "aperture", "power", "xsection"}));
  fit->add_option("--input", fit_input, "data csv")->required()->check(CLI::ExistingFile);
  fit->add_option("--config", fit_config, "experiment config (spectral fits)")
      ->check(CLI::ExistingFile);
  fit->add_option("--components", components, "gaussian components for aperture fits")
      ->check(CLI::Range(1, 2));

  std::string rep_config;
  double rate_cps = 20.0;
  double enhancement = 0.0;
  CLI::App* rep = app.add_subcommand("report", "derived interaction-energy numbers");
  rep->fallthrough();
  rep->add_option("--config", rep_config, "experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  rep->add_option("--rate-cps", rate_cps, "measured correlated pair rate");
  rep->add_option("--enhancement", enhancement,
                  "add a projected amplitude at this pair-rate enhancement");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*sim) run_simulate(g, sim_config, threads);
    if (*cor) run_correlate(g, cor_input, max_delay, rep_rate_mhz, n_pulses_override);
    if (*fit) run_fit(g, fit_kind, fit_input, fit_config, components);
    if (*rep) run_report(g, rep_config, rate_cps, enhancement);
  } catch (const sas::convergence_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const sas::data_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
