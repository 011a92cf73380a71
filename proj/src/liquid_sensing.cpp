#include "fpw/liquid_sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fpw/errors.hpp"
#include "text_util.hpp"

namespace fpw {

void LiquidSample::validate() const {
  if (!(density > 0.0)) throw InvalidInput("liquid '" + name + "': density must be > 0");
  if (!(viscosity >= 0.0)) throw InvalidInput("liquid '" + name + "': viscosity must be >= 0");
}

namespace liquids {

LiquidSample ipa() { return {"ipa", 787.0, 0.0025}; }
LiquidSample water() { return {"water", 1000.0, 0.001}; }
LiquidSample saline() { return {"saline", 1200.0, 0.0015}; }
LiquidSample glycerol() { return {"glycerol", 1200.0, 0.934}; }

std::vector<LiquidSample> presets() { return {ipa(), water(), saline(), glycerol()}; }

std::string_view bundled_library() {
  return "# name  density_kg_m3  viscosity_pa_s\n"
         "ipa       787   0.0025\n"
         "water     1000  0.001\n"
         "saline    1200  0.0015\n"
         "glycerol  1200  0.934\n";
}

}  // namespace liquids

std::vector<LiquidSample> parse_liquid_library(std::string_view text) {
  std::vector<LiquidSample> out;
  detail::for_each_line(text, [&](int number, std::string_view line) {
    const auto fields = detail::split_ws(detail::strip_comment(line));
    if (fields.empty()) return;
    if (fields.size() != 3)
      throw ConfigError(number, "expected 'name density_kg_m3 viscosity_pa_s'");
    const auto density = detail::parse_double(fields[1]);
    const auto viscosity = detail::parse_double(fields[2]);
    if (!density) throw ConfigError(number, "malformed density '" + std::string(fields[1]) + "'");
    if (!viscosity)
      throw ConfigError(number, "malformed viscosity '" + std::string(fields[2]) + "'");
    LiquidSample sample{std::string(fields[0]), *density, *viscosity};
    try {
      sample.validate();
    } catch (const InvalidInput& e) {
      throw ConfigError(number, e.what());
    }
    const bool duplicate = std::any_of(out.begin(), out.end(),
                                       [&](const auto& l) { return l.name == sample.name; });
    if (duplicate) throw ConfigError(number, "duplicate liquid '" + sample.name + "'");
    out.push_back(std::move(sample));
  });
  return out;
}

double CalibrationFit::min_density() const {
  return std::min_element(points.begin(), points.end(),
                          [](const auto& a, const auto& b) { return a.density < b.density; })
      ->density;
}

double CalibrationFit::max_density() const {
  return std::max_element(points.begin(), points.end(),
                          [](const auto& a, const auto& b) { return a.density < b.density; })
      ->density;
}

CalibrationFit fit_density_sensitivity(std::span<const CalibrationPoint> points) {
  if (points.size() < 2) throw DegenerateFit("calibration needs at least two points");
  const double n = static_cast<double>(points.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& p : points) {
    if (!std::isfinite(p.density) || !std::isfinite(p.frequency))
      throw InvalidInput("calibration points must be finite");
    mean_x += p.density;
    mean_y += p.frequency;
  }
  mean_x /= n;
  mean_y /= n;

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    const double dx = p.density - mean_x;
    const double dy = p.frequency - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double spread = std::abs(mean_x) > 0.0 ? std::abs(mean_x) : 1.0;
  if (sxx <= 1e-24 * spread * spread * n)
    throw DegenerateFit("calibration needs at least two distinct densities");

  CalibrationFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double sse = 0.0;
  for (const auto& p : points) {
    const double r = p.frequency - fit.evaluate(p.density);
    sse += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  fit.points.assign(points.begin(), points.end());
  return fit;
}

double predict_frequency(const CompositePlate& plate, double wavelength,
                         const LiquidSample& liquid, double tension) {
  liquid.validate();
  LoadingState loading{tension, liquid.as_load()};
  return loaded_velocity(plate, loading, wavelength).resonant_frequency;
}

DensityEstimate invert_density_calibrated(double frequency, const CalibrationFit& fit) {
  if (fit.slope == 0.0 || !std::isfinite(fit.slope))
    throw InvalidInput("calibration slope is zero; density cannot be inverted");
  DensityEstimate est;
  est.density = (frequency - fit.intercept) / fit.slope;
  if (!fit.points.empty())
    est.out_of_range = est.density < fit.min_density() || est.density > fit.max_density();
  return est;
}

CouplingReport viscosity_coupling_report(const LiquidSample& liquid, const CompositePlate& plate,
                                         double wavelength, double threshold) {
  liquid.validate();
  const VelocitySolution sol = loaded_velocity(plate, {0.0, liquid.as_load()}, wavelength);
  CouplingReport r;
  r.viscous_mass = sol.viscous_mass;
  r.inertial_mass = liquid.density * sol.evanescent_length;
  r.ratio = r.viscous_mass / r.inertial_mass;
  r.viscous_fraction = r.viscous_mass / (r.inertial_mass + r.viscous_mass);
  r.density_invertible = r.viscous_fraction <= threshold;
  r.verdict = r.density_invertible ? "density-sensing valid"
                                   : "coupled - not invertible from frequency alone";
  return r;
}

double tension_effect(double base_frequency, double tension_sensitivity, double tension) {
  if (!(tension >= 0.0)) throw InvalidInput("tension must be >= 0");
  return base_frequency * tension_sensitivity * tension;
}

const ReferenceDatasets& load_reference_datasets() {
  static const ReferenceDatasets data{
      {
          {"ipa", 787.0, 0.0025, 197.48, 4.94e6},
          {"water", 1000.0, 0.001, 190.05, 4.75e6},
          {"saline", 1200.0, 0.0015, 183.77, 4.59e6},
      },
      {
          {"saline", 4.59e6, {4.98e6, -33.38, "saline"}},
          {"glycerol", 4.49e6, {4.73e6, -37.04, "glycerol"}},
      },
      5.53e6,
      5.88e6,
      -0.848e6 / 1000.0,
  };
  return data;
}

}  // namespace fpw
