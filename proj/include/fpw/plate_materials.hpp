#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fpw {

/// One isotropic layer of the membrane stack. SI units throughout.
struct MaterialLayer {
  std::string name;
  double thickness = 0.0;      // m
  double young_modulus = 0.0;  // N/m^2
  double poisson_ratio = 0.0;
  double density = 0.0;        // kg/m^3

  /// Throws InvalidInput unless thickness, E, density > 0 and 0 <= nu < 0.5.
  void validate() const;
};

double effective_young_modulus(std::span<const MaterialLayer> layers);
double effective_poisson(std::span<const MaterialLayer> layers);
double mass_per_area(std::span<const MaterialLayer> layers);
double total_thickness(std::span<const MaterialLayer> layers);

/// E / (1 - nu^2).
double plate_modulus(double young_modulus, double poisson_ratio);

/// Raw flexural rigidity E' h^3 / 12 in N*m.
double flexural_rigidity(double plate_modulus, double thickness);

/// Flexural rigidity times k^2 with k = 2 pi / wavelength, in N/m. This is
/// the stiffness term that enters the A0 velocity expression.
double bending_term(double plate_modulus, double thickness, double wavelength);

/// Published values that replace the computed effective parameters. Unset
/// fields fall back to the layer computation.
struct PlateOverrides {
  std::optional<double> young_modulus;
  std::optional<double> poisson_ratio;
  std::optional<double> plate_modulus;
  std::optional<double> mass_per_area;
  std::optional<double> bending_term;

  bool any() const noexcept {
    return young_modulus || poisson_ratio || plate_modulus || mass_per_area ||
           bending_term;
  }
};

/// Immutable layer stack with its effective plate parameters.
///
/// The `computed_*` accessors always derive from the layers. The unprefixed
/// accessors honour the overrides, and derived quantities chain through them
/// (an overridden E feeds E', an overridden E' feeds B, and so on).
class CompositePlate {
 public:
  explicit CompositePlate(std::vector<MaterialLayer> layers,
                          PlateOverrides overrides = {});

  const std::vector<MaterialLayer>& layers() const noexcept { return layers_; }
  const PlateOverrides& overrides() const noexcept { return overrides_; }

  double total_thickness() const noexcept { return thickness_; }

  double computed_young_modulus() const noexcept { return young_; }
  double computed_poisson() const noexcept { return poisson_; }
  double computed_mass_per_area() const noexcept { return mass_; }
  double computed_plate_modulus() const;
  double computed_bending_term(double wavelength) const;

  double young_modulus() const;
  double poisson_ratio() const;
  double plate_modulus() const;
  double mass_per_area() const;
  double flexural_rigidity() const;
  double bending_term(double wavelength) const;

  /// Copy with a different override set.
  CompositePlate with_overrides(PlateOverrides overrides) const;

 private:
  std::vector<MaterialLayer> layers_;
  PlateOverrides overrides_;
  double thickness_;
  double young_;
  double poisson_;
  double mass_;
};

}  // namespace fpw
