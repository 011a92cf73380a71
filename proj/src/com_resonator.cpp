#include "fpw/com_resonator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fpw/errors.hpp"

namespace fpw {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

double acoustic_center_frequency(const DeviceGeometry& g, const ComParameters& p) {
  return p.free_velocity / g.wavelength;
}

// Hilbert partner of the sinc^2 radiation conductance, normalised to G_a0.
double susceptance_shape(double x) {
  if (std::abs(x) < 1e-4) return -2.0 * x / 3.0;
  return (std::sin(2.0 * x) - 2.0 * x) / (2.0 * x * x);
}

double sweep_variable(double frequency, double center_frequency, int pairs) {
  return pairs * kPi * (frequency - center_frequency) / center_frequency;
}

}  // namespace

void DeviceGeometry::validate() const {
  if (!(wavelength > 0.0)) throw InvalidInput("geometry: wavelength must be > 0");
  if (idt_pairs < 1) throw InvalidInput("geometry: idt_pairs must be >= 1");
  if (grating_strips < 0) throw InvalidInput("geometry: grating_strips must be >= 0");
  if (!(overlap > 0.0)) throw InvalidInput("geometry: overlap must be > 0");
  if (!(idt_separation >= 0.0)) throw InvalidInput("geometry: idt_separation must be >= 0");
  if (!(grating_gap >= 0.0)) throw InvalidInput("geometry: grating_gap must be >= 0");
  if (!(metallization_ratio > 0.0 && metallization_ratio < 1.0))
    throw InvalidInput("geometry: metallization_ratio must lie in (0, 1)");
}

void ComParameters::validate() const {
  if (!(free_velocity > 0.0)) throw InvalidInput("com: free velocity must be > 0");
  if (!(std::abs(strip_reflectivity) < 0.2))
    throw InvalidInput("com: |strip_reflectivity| must be < 0.2");
  if (!std::isfinite(reflection_phase)) throw InvalidInput("com: reflection phase must be finite");
  if (!(transduction_strength >= 0.0)) throw InvalidInput("com: transduction strength must be >= 0");
  if (!(static_capacitance_per_pair >= 0.0))
    throw InvalidInput("com: static capacitance must be >= 0");
  if (!(attenuation >= 0.0)) throw InvalidInput("com: attenuation must be >= 0");
  if (!(load_resistance > 0.0)) throw InvalidInput("com: load resistance must be > 0");
}

TransmissionMatrix2 operator*(const TransmissionMatrix2& a, const TransmissionMatrix2& b) {
  return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
          a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}

double design_spacing(int n, double wavelength) {
  if (n < 0) throw InvalidInput("design_spacing: n must be >= 0");
  if (!(wavelength > 0.0)) throw InvalidInput("design_spacing: wavelength must be > 0");
  return (0.125 + 0.5 * n) * wavelength;
}

cplx propagation_constant(double frequency, const ComParameters& params) {
  return {2.0 * kPi * frequency / params.free_velocity, -params.attenuation};
}

TransmissionMatrix2 spacing_matrix(double frequency, double length, const ComParameters& params) {
  if (!(length >= 0.0)) throw InvalidInput("spacing_matrix: length must be >= 0");
  const cplx phase = kI * propagation_constant(frequency, params) * length;
  return {std::exp(phase), 0.0, 0.0, std::exp(-phase)};
}

TransmissionMatrix2 grating_matrix(double frequency, const DeviceGeometry& geometry,
                                   const ComParameters& params, CavitySide cavity) {
  const double length = geometry.grating_length();
  const double r = std::abs(params.strip_reflectivity);
  if (geometry.grating_strips == 0 || r == 0.0) return spacing_matrix(frequency, length, params);

  // Envelope equations, with W+ = r e^{-i b0 x} and W- = s e^{i b0 x}:
  //   r' = -i delta r - i kappa s,   s' = i conj(kappa) r + i delta s
  const double bragg = 2.0 * kPi / geometry.wavelength;
  const cplx delta = propagation_constant(frequency, params) - bragg;
  const cplx unit = std::polar(1.0, std::arg(params.strip_reflectivity) + params.reflection_phase);
  const double kappa_mag = 2.0 * r / geometry.wavelength;
  const cplx kappa = kappa_mag * (cavity == CavitySide::kRight ? unit : std::conj(unit));

  const cplx sigma = std::sqrt(kappa_mag * kappa_mag - delta * delta);
  const cplx sl = sigma * length;
  const cplx ch = std::cosh(sl);
  // sinh(sigma L) / sigma, continuous through the band edge.
  const cplx sh = std::abs(sl) < 1e-6 ? length * (1.0 + sl * sl / 6.0) : std::sinh(sl) / sigma;

  // exp(-A L): envelopes at the right end to the left end.
  const TransmissionMatrix2 envelope{ch + kI * delta * sh, kI * kappa * sh,
                                     -kI * std::conj(kappa) * sh, ch - kI * delta * sh};
  const cplx carrier = std::exp(kI * bragg * length);
  return envelope * TransmissionMatrix2{carrier, 0.0, 0.0, 1.0 / carrier};
}

double array_factor(double frequency, double center_frequency, int pairs) {
  const double x = sweep_variable(frequency, center_frequency, pairs);
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

MixedMatrix3 idt_matrix(double frequency, const DeviceGeometry& geometry,
                        const ComParameters& params) {
  const double f0 = acoustic_center_frequency(geometry, params);
  const double length = geometry.idt_length();
  const double peak_amplitude =
      params.transduction_strength * geometry.idt_pairs * std::sqrt(geometry.overlap);
  const double amplitude = peak_amplitude * array_factor(frequency, f0, geometry.idt_pairs);

  const cplx half = std::exp(-kI * propagation_constant(frequency, params) * (length / 2.0));
  const cplx through = half * half;

  // Outgoing waves at the edges per volt. Alternating finger polarity makes
  // the two directions antisymmetric about the IDT center.
  const cplx emit_left = -kI * amplitude * half;
  const cplx emit_right = kI * amplitude * half;

  const double g0 = 2.0 * peak_amplitude * peak_amplitude;
  const double ga = 2.0 * amplitude * amplitude;
  const double ba = g0 * susceptance_shape(sweep_variable(frequency, f0, geometry.idt_pairs));
  const double omega = 2.0 * kPi * frequency;
  const cplx y33{ga, ba + omega * geometry.idt_pairs * params.static_capacitance_per_pair};

  MixedMatrix3 out;
  out.m[0] = {1.0 / through, 0.0, -emit_right / through};
  out.m[1] = {0.0, through, emit_left};
  out.m[2] = {2.0 * emit_left / through, 2.0 * emit_right,
              y33 - 2.0 * emit_left * emit_right / through};
  return out;
}

namespace {

struct Blocks {
  TransmissionMatrix2 g1, d2, d4, d6, g7;
  MixedMatrix3 t3, t5;
};

Blocks build_blocks(const DeviceGeometry& geometry, const ComParameters& params,
                    double frequency) {
  geometry.validate();
  params.validate();
  if (!(frequency > 0.0)) throw InvalidInput("frequency must be > 0");
  Blocks b;
  b.g1 = grating_matrix(frequency, geometry, params, CavitySide::kRight);
  b.d2 = spacing_matrix(frequency, geometry.grating_gap, params);
  b.t3 = idt_matrix(frequency, geometry, params);
  b.d4 = spacing_matrix(frequency, geometry.separation_length(), params);
  b.t5 = b.t3;
  b.d6 = b.d2;
  b.g7 = grating_matrix(frequency, geometry, params, CavitySide::kLeft);
  return b;
}

}  // namespace

CascadeResult cascade(const DeviceGeometry& geometry, const ComParameters& params,
                      double frequency) {
  const Blocks b = build_blocks(geometry, params, frequency);
  const TransmissionMatrix2 left = b.g1 * b.d2;
  const TransmissionMatrix2 upto_t5 = left * b.t3.acoustic() * b.d4;
  CascadeResult out;
  out.overall = upto_t5 * b.t5.acoustic() * b.d6 * b.g7;
  out.drive = left.apply(b.t3.coupling());
  out.output_drive = upto_t5.apply(b.t5.coupling());
  return out;
}

TwoPortAdmittance port_admittance(const DeviceGeometry& geometry, const ComParameters& params,
                                  double frequency) {
  const Blocks b = build_blocks(geometry, params, frequency);
  const TransmissionMatrix2 left = b.g1 * b.d2;
  const TransmissionMatrix2 upto_t5 = left * b.t3.acoustic() * b.d4;
  const TransmissionMatrix2 overall = upto_t5 * b.t5.acoustic() * b.d6 * b.g7;
  const auto drive3 = left.apply(b.t3.coupling());
  const auto drive5 = upto_t5.apply(b.t5.coupling());

  if (!(std::abs(overall.m11) > 1e-300) || !std::isfinite(std::abs(overall.m11))) {
    std::ostringstream msg;
    msg << "singular boundary system at " << frequency << " Hz";
    throw SingularBoundary(msg.str());
  }

  // W0 = M W7 + v3 drive3 + v5 drive5 with W0+ = 0 and W7- = 0.
  auto currents = [&](cplx v3, cplx v5) {
    const cplx w7_plus = -(v3 * drive3[0] + v5 * drive5[0]) / overall.m11;
    const std::array<cplx, 2> w7{w7_plus, 0.0};
    const auto w5 = (b.d6 * b.g7).apply(w7);
    const cplx i5 = b.t5.current(w5, v5);
    auto w4 = b.t5.acoustic().apply(w5);
    const auto tau5 = b.t5.coupling();
    w4[0] += tau5[0] * v5;
    w4[1] += tau5[1] * v5;
    const auto w3 = b.d4.apply(w4);
    const cplx i3 = b.t3.current(w3, v3);
    return std::pair{i3, i5};
  };

  const auto [y11, y21] = currents(1.0, 0.0);
  const auto [y12, y22] = currents(0.0, 1.0);
  return {y11, y12, y21, y22};
}

cplx transmission_coefficient(const DeviceGeometry& geometry, const ComParameters& params,
                              double frequency, Direction direction) {
  const TwoPortAdmittance y = port_admittance(geometry, params, frequency);
  const double r0 = params.load_resistance;
  const cplx det = (1.0 + r0 * y.y11) * (1.0 + r0 * y.y22) - r0 * r0 * y.y12 * y.y21;
  const cplx transfer = direction == Direction::kForward ? y.y21 : y.y12;
  const cplx s = -2.0 * r0 * transfer / det;
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
    std::ostringstream msg;
    msg << "non-finite transmission at " << frequency << " Hz";
    throw SingularBoundary(msg.str());
  }
  return s;
}

std::size_t FrequencyResponse::gap_count() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [](const auto& p) { return !p.s21; }));
}

FrequencyResponse s21_sweep(const DeviceGeometry& geometry, const ComParameters& params,
                            double f_start, double f_stop, int points, Direction direction) {
  geometry.validate();
  params.validate();
  if (points < 2) throw InvalidInput("s21_sweep: need at least 2 points");
  if (!(f_start > 0.0 && f_stop > f_start))
    throw InvalidInput("s21_sweep: require 0 < f_start < f_stop");

  FrequencyResponse out;
  out.geometry = geometry;
  out.params = params;
  out.points.resize(static_cast<std::size_t>(points));
  const double step = (f_stop - f_start) / (points - 1);
  for (int i = 0; i < points; ++i) {
    auto& p = out.points[static_cast<std::size_t>(i)];
    p.frequency = i == points - 1 ? f_stop : f_start + i * step;
    try {
      p.s21 = transmission_coefficient(geometry, params, p.frequency, direction);
    } catch (const SingularBoundary& e) {
      p.diagnostic = e.what();
    }
  }
  return out;
}

ResonanceSummary find_resonance(const FrequencyResponse& response) {
  std::vector<double> f;
  std::vector<double> db;
  for (const auto& p : response.points) {
    if (!p.s21) continue;
    const double mag = std::abs(*p.s21);
    f.push_back(p.frequency);
    db.push_back(mag > 0.0 ? 20.0 * std::log10(mag) : -HUGE_VAL);
  }
  if (f.size() < 3) throw NoResonance("response has fewer than 3 valid points");

  const auto peak_it = std::max_element(db.begin(), db.end());
  const auto k = static_cast<std::size_t>(peak_it - db.begin());
  if (k == 0 || k == db.size() - 1 || !std::isfinite(db[k]))
    throw NoResonance("response has no interior maximum");

  const double level = db[k] - 3.0;
  auto crossing = [&](std::size_t inside, std::size_t outside) {
    const double t = (db[inside] - level) / (db[inside] - db[outside]);
    return f[inside] + t * (f[outside] - f[inside]);
  };
  std::optional<double> lo, hi;
  for (std::size_t i = k; i > 0; --i) {
    if (db[i - 1] < level) {
      lo = crossing(i, i - 1);
      break;
    }
  }
  for (std::size_t i = k; i + 1 < db.size(); ++i) {
    if (db[i + 1] < level) {
      hi = crossing(i, i + 1);
      break;
    }
  }
  if (!lo || !hi) throw NoResonance("peak is not bounded by -3 dB points inside the sweep");

  // Vertex of the parabola through the peak sample and its neighbours.
  double peak_f = f[k];
  const double a = f[k] - f[k - 1], b = f[k] - f[k + 1];
  const double da = db[k] - db[k + 1], db_ = db[k] - db[k - 1];
  const double denom = a * da - b * db_;
  if (denom != 0.0 && std::isfinite(denom)) {
    const double shift = 0.5 * (a * a * da - b * b * db_) / denom;
    if (std::isfinite(shift) && shift > -b && shift < a) peak_f = f[k] - shift;
  }

  ResonanceSummary s;
  s.peak_frequency = peak_f;
  s.insertion_loss = db[k];
  s.peak_magnitude = std::pow(10.0, db[k] / 20.0);
  s.bandwidth_3db = *hi - *lo;
  s.quality_factor = s.peak_frequency / s.bandwidth_3db;
  return s;
}

FrequencyResponse fpw_device_response(const CompositePlate& plate, const LoadingState& loading,
                                      const DeviceGeometry& geometry, const ComParameters& params,
                                      const FpwSweepOptions& options) {
  if (!(options.relative_span > 0.0 && options.relative_span < 1.0))
    throw InvalidInput("fpw_device_response: relative span must lie in (0, 1)");
  const VelocitySolution sol = loaded_velocity(plate, loading, geometry.wavelength);
  ComParameters fpw = params;
  fpw.free_velocity = sol.phase_velocity;
  if (options.viscous_loss)
    fpw.attenuation += viscous_attenuation(plate, loading, geometry.wavelength, sol);
  const double f0 = sol.resonant_frequency;
  return s21_sweep(geometry, fpw, f0 * (1.0 - options.relative_span),
                   f0 * (1.0 + options.relative_span), options.points);
}

void write_csv(std::ostream& os, const FrequencyResponse& response) {
  os << "f_hz,s21_re,s21_im,s21_db\n";
  char line[128];
  for (const auto& p : response.points) {
    if (p.s21) {
      const double mag = std::abs(*p.s21);
      std::snprintf(line, sizeof line, "%.9e,%.9e,%.9e,%.9e\n", p.frequency, p.s21->real(),
                    p.s21->imag(), 20.0 * std::log10(mag));
    } else {
      std::snprintf(line, sizeof line, "%.9e,nan,nan,nan\n", p.frequency);
    }
    os << line;
  }
}

}  // namespace fpw
