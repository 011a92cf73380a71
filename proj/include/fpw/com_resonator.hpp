#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fpw/fpw_dispersion.hpp"
#include "fpw/plate_materials.hpp"

namespace fpw {

using cplx = std::complex<double>;

/// Two-port layout on the membrane, left to right:
///   grating | gap | IDT (input) | separation | IDT (output) | gap | grating
struct DeviceGeometry {
  double wavelength = 40e-6;       // m, also the IDT period
  int idt_pairs = 20;              // finger pairs per IDT
  int grating_strips = 40;         // strips per grating at pitch lambda/2; 0 = delay line
  double overlap = 50.0;           // IDT aperture in wavelengths
  double idt_separation = 10.0;    // edge-to-edge IDT spacing in wavelengths
  double grating_gap = 5e-6;       // m, grating edge to IDT cell boundary (D2 = D6)
  double metallization_ratio = 0.5;

  double grating_length() const noexcept { return grating_strips * wavelength / 2.0; }
  double idt_length() const noexcept { return idt_pairs * wavelength; }
  double separation_length() const noexcept { return idt_separation * wavelength; }
  /// Grating outer edge to grating outer edge.
  double total_length() const noexcept {
    return 2.0 * grating_length() + 2.0 * grating_gap + 2.0 * idt_length() +
           separation_length();
  }

  void validate() const;
};

/// Coupling-of-modes constants. Only the free velocity and the reflection
/// phase come with published values; the rest are normalised placeholders.
struct ComParameters {
  double free_velocity = 2400.0;  // m/s
  /// Per-strip reflection coefficient. The reflectivity of electrode strips on
  /// sol-gel PZT is not known; 0.02 is a placeholder.
  cplx strip_reflectivity{0.02, 0.0};
  double reflection_phase = 0.0;            // rad, offset on the Bragg reflection
  double transduction_strength = 1.5e-4;    // sqrt(S) per finger pair per sqrt(aperture/lambda)
  double static_capacitance_per_pair = 0.5e-12;  // F
  double attenuation = 0.0;                 // Np/m
  double load_resistance = 50.0;            // ohm, source and load reference

  void validate() const;
};

/// 2x2 wave-amplitude transfer matrix. Maps (W+, W-) at a right reference
/// plane to (W+, W-) at the left one, W+ travelling right.
struct TransmissionMatrix2 {
  cplx m11{1.0}, m12{0.0}, m21{0.0}, m22{1.0};

  static TransmissionMatrix2 identity() { return {}; }
  cplx determinant() const { return m11 * m22 - m12 * m21; }
  std::array<cplx, 2> apply(const std::array<cplx, 2>& w) const {
    return {m11 * w[0] + m12 * w[1], m21 * w[0] + m22 * w[1]};
  }
  /// Reflection and transmission for a wave launched from the left with
  /// nothing incident from the right.
  cplx reflection_from_left() const { return m21 / m11; }
  cplx transmission() const { return 1.0 / m11; }
  /// Reflection for a wave launched from the right with nothing incident
  /// from the left.
  cplx reflection_from_right() const { return -m12 / m11; }
};

TransmissionMatrix2 operator*(const TransmissionMatrix2& a, const TransmissionMatrix2& b);

/// IDT in mixed transfer form:
///   [W+_l, W-_l, I]^T = M [W+_r, W-_r, V]^T
/// Rows 0-1 are the acoustic transfer plus the driven column tau; row 2 gives
/// the terminal current for the given incident waves and voltage.
struct MixedMatrix3 {
  std::array<std::array<cplx, 3>, 3> m{};

  TransmissionMatrix2 acoustic() const { return {m[0][0], m[0][1], m[1][0], m[1][1]}; }
  std::array<cplx, 2> coupling() const { return {m[0][2], m[1][2]}; }
  cplx current(const std::array<cplx, 2>& w_right, cplx voltage) const {
    return m[2][0] * w_right[0] + m[2][1] * w_right[1] + m[2][2] * voltage;
  }
};

/// Which side of a grating faces the resonant cavity.
enum class CavitySide { kLeft, kRight };

/// (1/8 + n/2) lambda.
double design_spacing(int n, double wavelength);

/// Complex wavenumber 2 pi f / v - i alpha.
cplx propagation_constant(double frequency, const ComParameters& params);

TransmissionMatrix2 spacing_matrix(double frequency, double length, const ComParameters& params);

/// Coupled-mode transfer matrix of the reflector. Distributed reflectivity
/// kappa = 2 |r_s| / lambda over N_g lambda / 2, Bragg wavenumber 2 pi / lambda.
/// At the Bragg frequency the lossless reflection seen from the cavity side is
/// -i exp(i (theta + arg r_s)) tanh(N_g |r_s|).
TransmissionMatrix2 grating_matrix(double frequency, const DeviceGeometry& geometry,
                                   const ComParameters& params,
                                   CavitySide cavity = CavitySide::kLeft);

/// sin(X)/X with X = N_p pi (f - f0) / f0.
double array_factor(double frequency, double center_frequency, int pairs);

/// Transversal IDT (no internal reflections) of N_p pairs with a center-lumped
/// source. Synchronous frequency is free_velocity / wavelength.
MixedMatrix3 idt_matrix(double frequency, const DeviceGeometry& geometry,
                        const ComParameters& params);

struct CascadeResult {
  TransmissionMatrix2 overall;       // G1 D2 T3 D4 T5 D6 G7 (acoustic parts)
  std::array<cplx, 2> drive{};       // G1 D2 tau3: response of W0 to unit input voltage
  std::array<cplx, 2> output_drive{};  // G1 D2 T3 D4 tau5: same for the output IDT
};

CascadeResult cascade(const DeviceGeometry& geometry, const ComParameters& params,
                      double frequency);

/// Short-circuit admittance of the two electrical ports (input = 1).
struct TwoPortAdmittance {
  cplx y11, y12, y21, y22;
};

/// Solves the cascade with no acoustic wave entering from outside the
/// gratings. Throws SingularBoundary if that system is singular.
TwoPortAdmittance port_admittance(const DeviceGeometry& geometry, const ComParameters& params,
                                  double frequency);

enum class Direction { kForward, kReverse };

/// S21 (or S12 for kReverse) referenced to params.load_resistance.
cplx transmission_coefficient(const DeviceGeometry& geometry, const ComParameters& params,
                              double frequency, Direction direction = Direction::kForward);

struct FrequencyPoint {
  double frequency = 0.0;
  std::optional<cplx> s21;  // empty at a singular point
  std::string diagnostic;
};

struct FrequencyResponse {
  std::vector<FrequencyPoint> points;
  DeviceGeometry geometry;
  ComParameters params;

  std::size_t gap_count() const;
};

/// Uniform sweep of `points` frequencies over [f_start, f_stop].
FrequencyResponse s21_sweep(const DeviceGeometry& geometry, const ComParameters& params,
                            double f_start, double f_stop, int points,
                            Direction direction = Direction::kForward);

struct ResonanceSummary {
  double peak_frequency = 0.0;    // Hz
  double peak_magnitude = 0.0;    // |S21|
  double insertion_loss = 0.0;    // dB, 20 log10 |S21|
  double bandwidth_3db = 0.0;     // Hz
  double quality_factor = 0.0;
};

/// Global |S21| maximum with a -3 dB bandwidth from linear interpolation of
/// the dB curve. Throws NoResonance for a response without an interior peak
/// or whose peak is not bounded by -3 dB points inside the sweep.
ResonanceSummary find_resonance(const FrequencyResponse& response);

struct FpwSweepOptions {
  double relative_span = 0.1;  // sweep f0 (1 +- span)
  int points = 2001;
  bool viscous_loss = true;    // add viscous_attenuation to params.attenuation
};

/// Resonator on the FPW membrane: the loaded A0 velocity replaces the free
/// velocity and the sweep is centered on the loaded synchronous frequency.
FrequencyResponse fpw_device_response(const CompositePlate& plate, const LoadingState& loading,
                                      const DeviceGeometry& geometry, const ComParameters& params,
                                      const FpwSweepOptions& options = {});

/// CSV with header f_hz,s21_re,s21_im,s21_db and %.9e fields; singular
/// points are written as nan.
void write_csv(std::ostream& os, const FrequencyResponse& response);

}  // namespace fpw
