#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fpw/plate_materials.hpp"

namespace fpw {

inline constexpr double kWaterSoundSpeed = 1482.0;  // m/s

/// Liquid in contact with one face of the membrane.
struct LiquidLoad {
  double density = 0.0;    // kg/m^3; 0 only together with viscosity 0
  double viscosity = 0.0;  // Pa*s
  /// Liquid column is deeper than the evanescent decay length. When false
  /// the entrained-mass model does not apply and the solution is flagged.
  bool covers_decay_length = true;
  double sound_speed = kWaterSoundSpeed;  // m/s, for the slow-wave check

  void validate() const;
};

struct LoadingState {
  double tension = 0.0;  // N/m, tensile >= 0
  std::optional<LiquidLoad> liquid;

  void validate() const;
};

struct VelocitySolution {
  double phase_velocity = 0.0;      // m/s
  double resonant_frequency = 0.0;  // Hz
  double evanescent_length = 0.0;   // m
  double viscous_length = 0.0;      // m
  double viscous_mass = 0.0;        // kg/m^2
  double total_mass = 0.0;          // kg/m^2, denominator of the velocity law
  double sound_speed_ratio = 0.0;   // v_p / c_liquid, 0 without liquid
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

struct ViscousMass {
  double decay_length = 0.0;  // m
  double areal_mass = 0.0;    // kg/m^2
};

struct Sensitivities {
  double mass = 0.0;     // s_m, m^3/kg
  double tension = 0.0;  // s_T, m/N
};

struct SolverOptions {
  double relative_tolerance = 1e-10;
  int max_iterations = 100;
  /// Above this v_p / c_liquid ratio the slow-wave assumption is reported.
  double sound_speed_warning_ratio = 0.5;
};

/// sqrt(B / M).
double unloaded_velocity(double bending_term, double mass_per_area);

/// lambda / (2 pi): penetration depth of the evanescent field into the liquid.
double evanescent_decay_length(double wavelength);

/// Shear-wave decay length sqrt(2 eta / (omega rho)) and the entrained areal
/// mass rho * delta_v / 2.
ViscousMass viscous_mass(const LiquidLoad& liquid, double angular_frequency);

/// Solves v = sqrt((T + B) / (M + rho delta_E + M_eta(omega))) with
/// omega = 2 pi v / lambda by fixed-point iteration from the unloaded
/// velocity. Without liquid, or with an inviscid liquid, the result is exact
/// after one evaluation.
///
/// Throws ConvergenceError (carrying the last velocity iterate) if the
/// relative step does not fall below the tolerance within max_iterations.
VelocitySolution loaded_velocity(const CompositePlate& plate,
                                 const LoadingState& loading, double wavelength,
                                 const SolverOptions& options = {});

/// First-order relative velocity sensitivities to liquid density and tension.
Sensitivities sensitivities(const CompositePlate& plate, const LoadingState& loading,
                            double wavelength);

/// v / lambda.
double resonant_frequency(double phase_velocity, double wavelength);

/// Liquid density that makes the plate resonate at `measured_frequency`,
/// assuming viscosity `assumed_viscosity`. Throws NoSolution when the
/// frequency is not below the liquid-free resonance.
double density_from_frequency(double measured_frequency, const CompositePlate& plate,
                              double wavelength, double assumed_viscosity,
                              double tension = 0.0);

/// Amplitude attenuation (Np/m) from the dissipative half of the viscous
/// shear load: alpha = omega M_eta / (2 M_total v_g), with the A0 group
/// velocity v_g = (T + 2B) / (M_total v_p). Zero without a viscous liquid.
double viscous_attenuation(const CompositePlate& plate, const LoadingState& loading,
                           double wavelength, const VelocitySolution& solution);

}  // namespace fpw
