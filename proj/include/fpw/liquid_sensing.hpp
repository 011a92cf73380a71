#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpw/fpw_dispersion.hpp"
#include "fpw/plate_materials.hpp"

namespace fpw {

struct LiquidSample {
  std::string name;
  double density = 0.0;    // kg/m^3
  double viscosity = 0.0;  // Pa*s

  void validate() const;
  LiquidLoad as_load() const { return {density, viscosity}; }
};

namespace liquids {
LiquidSample ipa();
LiquidSample water();
LiquidSample saline();
LiquidSample glycerol();
/// IPA, water, saline, glycerol.
std::vector<LiquidSample> presets();
/// Text of the bundled liquid library file.
std::string_view bundled_library();
}  // namespace liquids

/// Parses `name density_kg_m3 viscosity_pa_s` lines; `#` starts a comment.
/// Throws ConfigError naming the line on malformed input.
std::vector<LiquidSample> parse_liquid_library(std::string_view text);

struct Measurement {
  double frequency = 0.0;       // Hz
  double insertion_loss = 0.0;  // dB, <= 0
  std::string liquid_name;
};

struct CalibrationPoint {
  double density = 0.0;    // kg/m^3
  double frequency = 0.0;  // Hz
};

/// frequency = intercept + slope * density, fitted by ordinary least squares.
struct CalibrationFit {
  double slope = 0.0;      // Hz per kg/m^3
  double intercept = 0.0;  // Hz
  double r_squared = 0.0;
  std::vector<CalibrationPoint> points;

  double evaluate(double density) const { return intercept + slope * density; }
  double min_density() const;
  double max_density() const;
};

/// Throws DegenerateFit with fewer than two distinct densities.
CalibrationFit fit_density_sensitivity(std::span<const CalibrationPoint> points);

/// Model resonance for the plate loaded by `liquid` (dispersion model only).
double predict_frequency(const CompositePlate& plate, double wavelength,
                         const LiquidSample& liquid, double tension = 0.0);

struct DensityEstimate {
  double density = 0.0;  // kg/m^3
  bool out_of_range = false;
};

/// Inverts the fitted line. Flags results outside the calibrated densities.
DensityEstimate invert_density_calibrated(double frequency, const CalibrationFit& fit);

struct CouplingReport {
  double viscous_mass = 0.0;      // M_eta, kg/m^2
  double inertial_mass = 0.0;     // rho delta_E, kg/m^2
  double ratio = 0.0;             // M_eta / (rho delta_E)
  double viscous_fraction = 0.0;  // M_eta / (rho delta_E + M_eta)
  bool density_invertible = true;
  std::string verdict;
};

/// Compares the viscous and inertial liquid masses at the loaded operating
/// point. Above `threshold` viscous fraction, density and viscosity cannot
/// be separated from a frequency shift alone.
CouplingReport viscosity_coupling_report(const LiquidSample& liquid, const CompositePlate& plate,
                                         double wavelength, double threshold = 0.05);

/// First-order frequency shift f0 s_T T_x from in-plane tension.
double tension_effect(double base_frequency, double tension_sensitivity, double tension);

/// Published values, kept for side-by-side display. Not model targets.
struct ReferenceDatasets {
  struct TheoreticalPoint {
    std::string liquid;
    double density;      // kg/m^3
    double viscosity;    // Pa*s
    double phase_velocity;  // m/s
    double frequency;    // Hz
  };
  struct ViscosityPoint {
    std::string liquid;
    double theoretical_frequency;  // Hz
    Measurement measured;
  };
  std::vector<TheoreticalPoint> low_viscosity;  // three liquids, estimated
  std::vector<ViscosityPoint> viscosity_effect;  // saline vs glycerol
  double unloaded_measured_frequency;            // Hz
  double unloaded_estimated_frequency;           // Hz
  double density_sensitivity;                    // Hz per kg/m^3
};

const ReferenceDatasets& load_reference_datasets();

}  // namespace fpw
