#include "fpw/plate_materials.hpp"

#include <cmath>
#include <numbers>

#include "fpw/errors.hpp"

namespace fpw {

namespace {

void require_stack(std::span<const MaterialLayer> layers) {
  if (layers.empty()) throw InvalidInput("layer stack is empty");
  for (const auto& layer : layers) layer.validate();
}

template <class Field>
double thickness_weighted(std::span<const MaterialLayer> layers, Field field) {
  require_stack(layers);
  double weighted = 0.0;
  double h = 0.0;
  for (const auto& layer : layers) {
    weighted += field(layer) * layer.thickness;
    h += layer.thickness;
  }
  return weighted / h;
}

}  // namespace

void MaterialLayer::validate() const {
  const auto label = name.empty() ? std::string("layer") : "layer '" + name + "'";
  if (!(thickness > 0.0)) throw InvalidInput(label + ": thickness must be > 0");
  if (!(young_modulus > 0.0)) throw InvalidInput(label + ": Young's modulus must be > 0");
  if (!(density > 0.0)) throw InvalidInput(label + ": density must be > 0");
  if (!(poisson_ratio >= 0.0 && poisson_ratio < 0.5))
    throw InvalidInput(label + ": Poisson ratio must lie in [0, 0.5)");
}

double effective_young_modulus(std::span<const MaterialLayer> layers) {
  return thickness_weighted(layers, [](const MaterialLayer& l) { return l.young_modulus; });
}

double effective_poisson(std::span<const MaterialLayer> layers) {
  return thickness_weighted(layers, [](const MaterialLayer& l) { return l.poisson_ratio; });
}

double mass_per_area(std::span<const MaterialLayer> layers) {
  require_stack(layers);
  double m = 0.0;
  for (const auto& layer : layers) m += layer.density * layer.thickness;
  return m;
}

double total_thickness(std::span<const MaterialLayer> layers) {
  require_stack(layers);
  double h = 0.0;
  for (const auto& layer : layers) h += layer.thickness;
  return h;
}

double plate_modulus(double young_modulus, double poisson_ratio) {
  if (!(poisson_ratio < 1.0 && poisson_ratio > -1.0))
    throw InvalidInput("plate_modulus: Poisson ratio must satisfy |nu| < 1");
  return young_modulus / (1.0 - poisson_ratio * poisson_ratio);
}

double flexural_rigidity(double plate_modulus, double thickness) {
  if (!(thickness > 0.0)) throw InvalidInput("flexural_rigidity: thickness must be > 0");
  return plate_modulus * thickness * thickness * thickness / 12.0;
}

double bending_term(double plate_modulus, double thickness, double wavelength) {
  if (!(wavelength > 0.0)) throw InvalidInput("bending_term: wavelength must be > 0");
  const double k = 2.0 * std::numbers::pi / wavelength;
  return flexural_rigidity(plate_modulus, thickness) * k * k;
}

CompositePlate::CompositePlate(std::vector<MaterialLayer> layers, PlateOverrides overrides)
    : layers_(std::move(layers)), overrides_(overrides) {
  thickness_ = fpw::total_thickness(layers_);
  young_ = effective_young_modulus(layers_);
  poisson_ = effective_poisson(layers_);
  mass_ = fpw::mass_per_area(layers_);

  auto positive = [](const std::optional<double>& v, const char* what) {
    if (v && !(*v > 0.0)) throw InvalidInput(std::string("override ") + what + " must be > 0");
  };
  positive(overrides_.young_modulus, "young_modulus");
  positive(overrides_.plate_modulus, "plate_modulus");
  positive(overrides_.mass_per_area, "mass_per_area");
  positive(overrides_.bending_term, "bending_term");
  if (overrides_.poisson_ratio &&
      !(*overrides_.poisson_ratio >= 0.0 && *overrides_.poisson_ratio < 0.5))
    throw InvalidInput("override poisson_ratio must lie in [0, 0.5)");
}

double CompositePlate::computed_plate_modulus() const {
  return fpw::plate_modulus(young_, poisson_);
}

double CompositePlate::computed_bending_term(double wavelength) const {
  return fpw::bending_term(computed_plate_modulus(), thickness_, wavelength);
}

double CompositePlate::young_modulus() const {
  return overrides_.young_modulus.value_or(young_);
}

double CompositePlate::poisson_ratio() const {
  return overrides_.poisson_ratio.value_or(poisson_);
}

double CompositePlate::plate_modulus() const {
  if (overrides_.plate_modulus) return *overrides_.plate_modulus;
  return fpw::plate_modulus(young_modulus(), poisson_ratio());
}

double CompositePlate::mass_per_area() const {
  return overrides_.mass_per_area.value_or(mass_);
}

double CompositePlate::flexural_rigidity() const {
  return fpw::flexural_rigidity(plate_modulus(), thickness_);
}

// An overridden B was published for one specific wavelength; it is returned
// as-is regardless of the argument.
double CompositePlate::bending_term(double wavelength) const {
  if (overrides_.bending_term) return *overrides_.bending_term;
  return fpw::bending_term(plate_modulus(), thickness_, wavelength);
}

CompositePlate CompositePlate::with_overrides(PlateOverrides overrides) const {
  return CompositePlate(layers_, overrides);
}

}  // namespace fpw
