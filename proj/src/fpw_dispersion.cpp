#include "fpw/fpw_dispersion.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fpw/errors.hpp"

namespace fpw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

void LiquidLoad::validate() const {
  if (!(density >= 0.0)) throw InvalidInput("liquid density must be >= 0");
  if (!(viscosity >= 0.0)) throw InvalidInput("liquid viscosity must be >= 0");
  if (density == 0.0 && viscosity > 0.0)
    throw InvalidInput("a viscous liquid needs a positive density");
  if (!(sound_speed > 0.0)) throw InvalidInput("liquid sound speed must be > 0");
}

void LoadingState::validate() const {
  if (!(tension >= 0.0)) throw InvalidInput("tension must be >= 0 (compressive membranes unsupported)");
  if (liquid) liquid->validate();
}

double unloaded_velocity(double bending_term, double mass_per_area) {
  if (!(bending_term > 0.0)) throw InvalidInput("bending term must be > 0");
  if (!(mass_per_area > 0.0)) throw InvalidInput("mass per area must be > 0");
  return std::sqrt(bending_term / mass_per_area);
}

double evanescent_decay_length(double wavelength) {
  if (!(wavelength > 0.0)) throw InvalidInput("wavelength must be > 0");
  return wavelength / kTwoPi;
}

ViscousMass viscous_mass(const LiquidLoad& liquid, double angular_frequency) {
  liquid.validate();
  if (!(angular_frequency > 0.0)) throw InvalidInput("angular frequency must be > 0");
  if (liquid.viscosity == 0.0) return {};
  const double delta_v =
      std::sqrt(2.0 * liquid.viscosity / (angular_frequency * liquid.density));
  return {delta_v, liquid.density * delta_v / 2.0};
}

VelocitySolution loaded_velocity(const CompositePlate& plate, const LoadingState& loading,
                                 double wavelength, const SolverOptions& options) {
  loading.validate();
  const double delta_e = evanescent_decay_length(wavelength);
  const double stiffness = loading.tension + plate.bending_term(wavelength);
  const double plate_mass = plate.mass_per_area();

  VelocitySolution sol;
  sol.evanescent_length = delta_e;

  if (!loading.liquid) {
    // Same expression as unloaded_velocity so T = 0 reproduces it exactly.
    sol.phase_velocity = unloaded_velocity(stiffness, plate_mass);
    sol.total_mass = plate_mass;
    sol.iterations = 1;
    sol.converged = true;
    sol.resonant_frequency = resonant_frequency(sol.phase_velocity, wavelength);
    return sol;
  }

  const LiquidLoad& liquid = *loading.liquid;
  const double inertial = plate_mass + liquid.density * delta_e;

  double v = unloaded_velocity(stiffness, inertial);
  ViscousMass visc{};
  int it = 0;
  bool converged = liquid.viscosity == 0.0;
  if (converged) it = 1;
  while (!converged && it < options.max_iterations) {
    ++it;
    visc = viscous_mass(liquid, kTwoPi * v / wavelength);
    const double next = std::sqrt(stiffness / (inertial + visc.areal_mass));
    const double step = std::abs(next - v) / next;
    v = next;
    converged = step < options.relative_tolerance;
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "loaded_velocity: fixed point did not converge in " << it
        << " iterations (last v_p = " << v << " m/s)";
    throw ConvergenceError(msg.str(), v, it);
  }

  sol.phase_velocity = v;
  sol.resonant_frequency = resonant_frequency(v, wavelength);
  sol.viscous_length = visc.decay_length;
  sol.viscous_mass = visc.areal_mass;
  sol.total_mass = inertial + visc.areal_mass;
  sol.iterations = it;
  sol.converged = true;
  sol.sound_speed_ratio = v / liquid.sound_speed;

  if (!liquid.covers_decay_length)
    sol.warnings.emplace_back(
        "liquid level is below the evanescent decay length; entrained-mass model not valid");
  if (sol.sound_speed_ratio > options.sound_speed_warning_ratio) {
    std::ostringstream msg;
    msg << "phase velocity is " << sol.sound_speed_ratio
        << " of the liquid sound speed; slow-wave decay length assumption is weak";
    sol.warnings.push_back(msg.str());
  }
  return sol;
}

Sensitivities sensitivities(const CompositePlate& plate, const LoadingState& loading,
                            double wavelength) {
  loading.validate();
  const double delta_e = evanescent_decay_length(wavelength);
  const double rho = loading.liquid ? loading.liquid->density : 0.0;
  Sensitivities s;
  s.mass = -delta_e / (2.0 * (plate.mass_per_area() + rho * delta_e));
  s.tension = 1.0 / (2.0 * (loading.tension + plate.bending_term(wavelength)));
  return s;
}

double resonant_frequency(double phase_velocity, double wavelength) {
  if (!(wavelength > 0.0)) throw InvalidInput("wavelength must be > 0");
  if (!(phase_velocity > 0.0)) throw InvalidInput("phase velocity must be > 0");
  return phase_velocity / wavelength;
}

double density_from_frequency(double measured_frequency, const CompositePlate& plate,
                              double wavelength, double assumed_viscosity, double tension) {
  if (!(measured_frequency > 0.0)) throw InvalidInput("measured frequency must be > 0");
  if (!(assumed_viscosity >= 0.0)) throw InvalidInput("assumed viscosity must be >= 0");
  if (!(tension >= 0.0)) throw InvalidInput("tension must be >= 0");

  const double stiffness = tension + plate.bending_term(wavelength);
  const double plate_mass = plate.mass_per_area();
  const double f_free = resonant_frequency(unloaded_velocity(stiffness, plate_mass), wavelength);
  if (measured_frequency >= f_free) {
    std::ostringstream msg;
    msg << "measured frequency " << measured_frequency
        << " Hz is not below the liquid-free resonance " << f_free
        << " Hz; implied density is not positive";
    throw NoSolution(msg.str());
  }

  const double v = measured_frequency * wavelength;
  const double delta_e = evanescent_decay_length(wavelength);
  // Liquid-borne areal mass: rho delta_E + M_eta = added.
  const double added = stiffness / (v * v) - plate_mass;
  if (assumed_viscosity == 0.0) return added / delta_e;

  // With omega fixed by the measurement, M_eta = sqrt(eta rho / (2 omega)),
  // so the balance is a quadratic in s = sqrt(rho):
  //   delta_E s^2 + c s - added = 0,  c = sqrt(eta / (2 omega)).
  const double omega = kTwoPi * measured_frequency;
  const double c = std::sqrt(assumed_viscosity / (2.0 * omega));
  const double s = 2.0 * added / (c + std::sqrt(c * c + 4.0 * delta_e * added));
  return s * s;
}

double viscous_attenuation(const CompositePlate& plate, const LoadingState& loading,
                           double wavelength, const VelocitySolution& solution) {
  if (!loading.liquid || solution.viscous_mass == 0.0) return 0.0;
  const double omega = kTwoPi * solution.resonant_frequency;
  const double bending = plate.bending_term(wavelength);
  const double group_velocity = (loading.tension + 2.0 * bending) /
                                (solution.total_mass * solution.phase_velocity);
  return omega * solution.viscous_mass / (2.0 * solution.total_mass * group_velocity);
}

}  // namespace fpw
