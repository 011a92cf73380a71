#include "fpw/workbench.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "fpw/errors.hpp"
#include "fpw/fpw_dispersion.hpp"
#include "fpw/liquid_sensing.hpp"

namespace fpw {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Report {
 public:
  Report(std::ostream& out, RunResult& result) : out_(out), result_(result) {}

  void value(std::string_view key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9e", v);
    text(key, buf);
  }
  void integer(std::string_view key, long v) { text(key, std::to_string(v)); }
  void text(std::string_view key, std::string_view v) {
    std::string line(key);
    line += " = ";
    line += v;
    out_ << line << '\n';
    result_.summary.push_back(std::move(line));
  }
  void raw(const std::string& line) {
    out_ << line << '\n';
    result_.summary.push_back(line);
  }

 private:
  std::ostream& out_;
  RunResult& result_;
};

struct Options {
  std::string config = "paper_device";
  std::string liquids_file;

  std::string liquid;
  double tension = 0.0;
  double threshold = 0.05;
  std::string sweep_out;
  std::string rho_min = "500";
  std::string rho_max = "2000";
  int rho_points = 31;

  bool bulk = false;
  bool fpw = false;
  std::string out_file;
  int points = 2001;
  double span = 0.1;
  std::optional<double> f_start;
  std::optional<double> f_stop;
  bool no_viscous_loss = false;

  std::string points_file;
  double freq = 0.0;
  bool model = false;
  std::optional<double> viscosity;
};

DeviceConfig load_config(const Options& o) {
  if (o.config == "paper_device") return parse_device_config(bundled_device_config());
  return parse_device_config(read_file(o.config));
}

std::vector<LiquidSample> load_liquids(const Options& o) {
  if (o.liquids_file.empty()) return parse_liquid_library(liquids::bundled_library());
  return parse_liquid_library(read_file(o.liquids_file));
}

LiquidSample find_liquid(const Options& o, const std::string& name) {
  const auto library = load_liquids(o);
  for (const auto& l : library)
    if (l.name == name) return l;
  std::string names;
  for (const auto& l : library) names += (names.empty() ? "" : ", ") + l.name;
  throw UsageError("unknown liquid '" + name + "'; available: " + names);
}

void cmd_plate(const Options& o, Report& r) {
  const DeviceConfig cfg = load_config(o);
  const CompositePlate plate = cfg.plate();
  const double lambda = cfg.geometry.wavelength;
  r.integer("layers", static_cast<long>(plate.layers().size()));
  for (const auto& l : plate.layers()) r.text("layer", l.name);
  r.value("total_thickness_m", plate.total_thickness());
  r.value("young_modulus_pa", plate.young_modulus());
  r.value("poisson_ratio", plate.poisson_ratio());
  r.value("plate_modulus_pa", plate.plate_modulus());
  r.value("mass_per_area_computed_kg_m2", plate.computed_mass_per_area());
  if (plate.overrides().mass_per_area)
    r.value("mass_per_area_override_kg_m2", *plate.overrides().mass_per_area);
  r.value("flexural_rigidity_n_m", plate.flexural_rigidity());
  r.value("wavelength_m", lambda);
  r.value("bending_term_n_per_m", plate.bending_term(lambda));
}

void write_density_sweep(const Options& o, const CompositePlate& plate, double lambda,
                         double viscosity, RunResult& result) {
  const double lo = parse_density(o.rho_min);
  const double hi = parse_density(o.rho_max);
  if (o.rho_points < 2 || !(hi > lo) || !(lo > 0.0))
    throw UsageError("density sweep needs 0 < rho-min < rho-max and rho-points >= 2");
  std::ofstream csv(o.sweep_out, std::ios::binary);
  if (!csv) throw UsageError("cannot write '" + o.sweep_out + "'");
  csv << "density_kg_m3,phase_velocity_m_s,frequency_hz\n";
  char line[128];
  for (int i = 0; i < o.rho_points; ++i) {
    const double rho = i == o.rho_points - 1 ? hi : lo + i * (hi - lo) / (o.rho_points - 1);
    const auto sol = loaded_velocity(plate, {o.tension, LiquidLoad{rho, viscosity}}, lambda);
    std::snprintf(line, sizeof line, "%.9e,%.9e,%.9e\n", rho, sol.phase_velocity,
                  sol.resonant_frequency);
    csv << line;
  }
  result.output_files.push_back(o.sweep_out);
}

void cmd_dispersion(const Options& o, Report& r, RunResult& result, std::ostream& err) {
  const DeviceConfig cfg = load_config(o);
  const CompositePlate plate = cfg.plate();
  const double lambda = cfg.geometry.wavelength;
  LoadingState loading{o.tension, std::nullopt};
  std::optional<LiquidSample> liquid;
  if (!o.liquid.empty()) {
    liquid = find_liquid(o, o.liquid);
    loading.liquid = liquid->as_load();
  }
  const VelocitySolution sol = loaded_velocity(plate, loading, lambda);
  const Sensitivities s = sensitivities(plate, loading, lambda);

  r.text("liquid", liquid ? liquid->name : "none");
  r.value("tension_n_per_m", o.tension);
  r.value("phase_velocity_m_s", sol.phase_velocity);
  r.value("resonant_frequency_hz", sol.resonant_frequency);
  r.value("evanescent_length_m", sol.evanescent_length);
  r.value("viscous_length_m", sol.viscous_length);
  r.value("viscous_mass_kg_m2", sol.viscous_mass);
  r.value("mass_sensitivity_m3_per_kg", s.mass);
  r.value("tension_sensitivity_m_per_n", s.tension);
  r.integer("iterations", sol.iterations);
  if (liquid) {
    r.value("sound_speed_ratio", sol.sound_speed_ratio);
    const CouplingReport c = viscosity_coupling_report(*liquid, plate, lambda, o.threshold);
    r.value("viscous_fraction", c.viscous_fraction);
    r.text("verdict", c.verdict);
  }
  for (const auto& w : sol.warnings) err << "warning: " << w << '\n';

  if (!o.sweep_out.empty())
    write_density_sweep(o, plate, lambda, o.viscosity.value_or(liquid ? liquid->viscosity : 0.0),
                        result);
}

void cmd_s21(const Options& o, Report& r, RunResult& result) {
  if (o.bulk == o.fpw) throw UsageError("s21: choose exactly one of --bulk or --fpw");
  if (o.points < 2) throw UsageError("s21: --points must be >= 2");
  const DeviceConfig cfg = load_config(o);
  FrequencyResponse response;
  if (o.bulk) {
    const double f0 = cfg.com.free_velocity / cfg.geometry.wavelength;
    const double lo = o.f_start.value_or(f0 * (1.0 - o.span));
    const double hi = o.f_stop.value_or(f0 * (1.0 + o.span));
    r.text("mode", "bulk");
    r.value("free_velocity_m_s", cfg.com.free_velocity);
    response = s21_sweep(cfg.geometry, cfg.com, lo, hi, o.points);
  } else {
    const CompositePlate plate = cfg.plate();
    LoadingState loading{o.tension, std::nullopt};
    if (!o.liquid.empty()) loading.liquid = find_liquid(o, o.liquid).as_load();
    const auto sol = loaded_velocity(plate, loading, cfg.geometry.wavelength);
    r.text("mode", "fpw");
    r.text("liquid", o.liquid.empty() ? "none" : o.liquid);
    r.value("phase_velocity_m_s", sol.phase_velocity);
    if (o.f_start || o.f_stop) {
      ComParameters p = cfg.com;
      p.free_velocity = sol.phase_velocity;
      if (!o.no_viscous_loss)
        p.attenuation += viscous_attenuation(plate, loading, cfg.geometry.wavelength, sol);
      const double f0 = sol.resonant_frequency;
      response = s21_sweep(cfg.geometry, p, o.f_start.value_or(f0 * (1.0 - o.span)),
                           o.f_stop.value_or(f0 * (1.0 + o.span)), o.points);
    } else {
      response = fpw_device_response(plate, loading, cfg.geometry, cfg.com,
                                     {o.span, o.points, !o.no_viscous_loss});
    }
  }
  if (!o.out_file.empty()) {
    std::ofstream csv(o.out_file, std::ios::binary);
    if (!csv) throw UsageError("cannot write '" + o.out_file + "'");
    write_csv(csv, response);
    result.output_files.push_back(o.out_file);
  }
  r.integer("points", static_cast<long>(response.points.size()));
  r.integer("gaps", static_cast<long>(response.gap_count()));
  const ResonanceSummary s = find_resonance(response);
  r.value("peak_frequency_hz", s.peak_frequency);
  r.value("insertion_loss_db", s.insertion_loss);
  r.value("bandwidth_3db_hz", s.bandwidth_3db);
  r.value("quality_factor", s.quality_factor);
}

CalibrationFit fit_from_file(const std::string& path) {
  const auto points = parse_calibration_points(read_file(path));
  return fit_density_sensitivity(points);
}

void cmd_fit(const Options& o, Report& r) {
  const CalibrationFit fit = fit_from_file(o.points_file);
  r.integer("points", static_cast<long>(fit.points.size()));
  r.value("slope_hz_per_kg_m3", fit.slope);
  r.value("slope_mhz_per_g_cm3", fit.slope * 1000.0 / 1e6);
  r.value("intercept_hz", fit.intercept);
  r.value("r_squared", fit.r_squared);
}

void cmd_invert(const Options& o, Report& r, std::ostream& err) {
  if (o.model == !o.points_file.empty())
    throw UsageError("invert: choose exactly one of --points FILE or --model");
  double density = 0.0;
  if (o.model) {
    const DeviceConfig cfg = load_config(o);
    density = density_from_frequency(o.freq, cfg.plate(), cfg.geometry.wavelength,
                                     o.viscosity.value_or(0.0), o.tension);
    r.text("method", "model");
  } else {
    const CalibrationFit fit = fit_from_file(o.points_file);
    const DensityEstimate est = invert_density_calibrated(o.freq, fit);
    density = est.density;
    r.text("method", "calibration");
    if (est.out_of_range)
      err << "warning: density lies outside the calibrated range [" << fit.min_density()
          << ", " << fit.max_density() << "] kg/m^3\n";
  }
  r.value("frequency_hz", o.freq);
  r.value("density_kg_m3", density);
  r.value("density_g_cm3", density / 1000.0);
}

void cmd_compare(const Options& o, Report& r) {
  const DeviceConfig cfg = load_config(o);
  const CompositePlate plate = cfg.plate();
  const double lambda = cfg.geometry.wavelength;
  const auto& ref = load_reference_datasets();
  const auto library = load_liquids(o);
  auto model = [&](const std::string& name) -> std::optional<double> {
    for (const auto& l : library)
      if (l.name == name) return predict_frequency(plate, lambda, l);
    return std::nullopt;
  };
  char line[160];
  r.raw("# published values are shown beside the model; they are not model targets");
  std::snprintf(line, sizeof line, "%-10s %14s %14s %14s %10s", "liquid", "model_hz",
                "published_hz", "measured_hz", "il_db");
  r.raw(line);
  const double air = loaded_velocity(plate, {}, lambda).resonant_frequency;
  std::snprintf(line, sizeof line, "%-10s %14.6e %14.6e %14.6e %10s", "none", air,
                ref.unloaded_estimated_frequency, ref.unloaded_measured_frequency, "-");
  r.raw(line);
  for (const auto& p : ref.low_viscosity) {
    const auto m = model(p.liquid);
    std::snprintf(line, sizeof line, "%-10s %14.6e %14.6e %14s %10s", p.liquid.c_str(),
                  m.value_or(0.0), p.frequency, "-", "-");
    r.raw(line);
  }
  for (const auto& p : ref.viscosity_effect) {
    const auto m = model(p.liquid);
    std::snprintf(line, sizeof line, "%-10s %14.6e %14.6e %14.6e %10.2f", p.liquid.c_str(),
                  m.value_or(0.0), p.theoretical_frequency, p.measured.frequency,
                  p.measured.insertion_loss);
    r.raw(line);
  }
}

int exit_status_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const ConfigError*>(&e) ||
      dynamic_cast<const InvalidInput*>(&e) || dynamic_cast<const DegenerateFit*>(&e) ||
      dynamic_cast<const NoSolution*>(&e))
    return kExitUsage;
  return kExitFailure;
}

}  // namespace

RunResult run_workbench(const std::vector<std::string>& args, std::ostream& out,
                        std::ostream& err) {
  RunResult result;
  Options o;

  CLI::App app{"Flexural-plate-wave resonator and liquid density workbench", "fpwsim"};
  app.require_subcommand(1);
  app.add_option("--config", o.config, "device config file, or 'paper_device' for the bundled one");
  app.add_option("--liquids", o.liquids_file, "liquid library file (default: bundled)");

  auto* plate = app.add_subcommand("plate", "print effective composite-plate parameters");

  auto* dispersion = app.add_subcommand("dispersion", "phase velocity and resonance under loading");
  dispersion->add_option("--liquid", o.liquid, "liquid name from the library");
  dispersion->add_option("--tension", o.tension, "in-plane tension T_x (N/m)");
  dispersion->add_option("--threshold", o.threshold, "viscous fraction above which density is not invertible");
  dispersion->add_option("--sweep-out", o.sweep_out, "write a density sweep CSV");
  dispersion->add_option("--rho-min", o.rho_min, "sweep start density (kg/m3 or g/cm3 suffix)");
  dispersion->add_option("--rho-max", o.rho_max, "sweep stop density");
  dispersion->add_option("--rho-points", o.rho_points, "sweep point count");
  dispersion->add_option("--viscosity", o.viscosity, "sweep viscosity (Pa s)");

  auto* s21 = app.add_subcommand("s21", "S21 sweep and resonance summary");
  auto* bulk_flag = s21->add_flag("--bulk", o.bulk, "bulk-PZT reference resonator");
  auto* fpw_flag = s21->add_flag("--fpw", o.fpw, "resonator on the FPW membrane");
  bulk_flag->excludes(fpw_flag);
  s21->add_option("--liquid", o.liquid, "liquid loading (with --fpw)");
  s21->add_option("--tension", o.tension, "in-plane tension T_x (N/m)");
  s21->add_option("--out", o.out_file, "CSV output path");
  s21->add_option("--points", o.points, "frequency points");
  s21->add_option("--span", o.span, "relative half-span around the synchronous frequency");
  s21->add_option("--f-start", o.f_start, "sweep start (Hz)");
  s21->add_option("--f-stop", o.f_stop, "sweep stop (Hz)");
  s21->add_flag("--no-viscous-loss", o.no_viscous_loss, "ignore viscous attenuation");

  auto* fit = app.add_subcommand("fit", "least-squares density calibration");
  fit->add_option("--points", o.points_file, "file of 'density frequency_hz' lines")->required();

  auto* invert = app.add_subcommand("invert", "density from a measured frequency");
  invert->add_option("--freq", o.freq, "measured frequency (Hz)")->required();
  invert->add_option("--points", o.points_file, "calibration points file");
  invert->add_flag("--model", o.model, "invert the dispersion model instead of a calibration");
  invert->add_option("--viscosity", o.viscosity, "assumed viscosity for --model (Pa s)");
  invert->add_option("--tension", o.tension, "in-plane tension for --model (N/m)");

  auto* compare = app.add_subcommand("compare", "model predictions beside published values");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("fpwsim");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    result.exit_status = code == 0 ? kExitOk : kExitUsage;
    return result;
  }

  Report report(out, result);
  try {
    if (plate->parsed()) {
      result.command = "plate";
      cmd_plate(o, report);
    } else if (dispersion->parsed()) {
      result.command = "dispersion";
      cmd_dispersion(o, report, result, err);
    } else if (s21->parsed()) {
      result.command = "s21";
      cmd_s21(o, report, result);
    } else if (fit->parsed()) {
      result.command = "fit";
      cmd_fit(o, report);
    } else if (invert->parsed()) {
      result.command = "invert";
      cmd_invert(o, report, err);
    } else if (compare->parsed()) {
      result.command = "compare";
      cmd_compare(o, report);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    result.exit_status = exit_status_for(e);
    return result;
  }
  result.exit_status = kExitOk;
  return result;
}

}  // namespace fpw
