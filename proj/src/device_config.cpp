#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>

#include "fpw/errors.hpp"
#include "fpw/workbench.hpp"
#include "text_util.hpp"

namespace fpw {

namespace {

enum class Section { kNone, kLayer, kGeometry, kCom, kOverride };

const std::map<std::string, Section, std::less<>> kSections{
    {"layer", Section::kLayer},
    {"geometry", Section::kGeometry},
    {"com", Section::kCom},
    {"override", Section::kOverride},
};

const std::set<std::string, std::less<>> kLayerKeys{"name", "thickness", "young_modulus",
                                                    "poisson_ratio", "density"};
const std::set<std::string, std::less<>> kGeometryKeys{
    "wavelength",     "idt_pairs",     "grating_strips", "overlap",
    "idt_separation", "spacing_index", "grating_gap",    "metallization_ratio"};
const std::set<std::string, std::less<>> kComKeys{
    "velocity",          "strip_reflectivity",  "strip_reflectivity_phase_deg",
    "reflection_phase_deg", "transduction_strength", "capacitance_per_pair",
    "attenuation",       "load_resistance"};
const std::set<std::string, std::less<>> kOverrideKeys{"young_modulus", "poisson_ratio",
                                                       "plate_modulus", "mass_per_area",
                                                       "bending_term"};

constexpr double kDegree = std::numbers::pi / 180.0;

struct Entry {
  std::string value;
  int line = 0;
};

struct Block {
  Section section = Section::kNone;
  int header_line = 0;
  std::map<std::string, Entry, std::less<>> entries;
};

const std::set<std::string, std::less<>>& keys_for(Section s) {
  switch (s) {
    case Section::kLayer: return kLayerKeys;
    case Section::kGeometry: return kGeometryKeys;
    case Section::kCom: return kComKeys;
    default: return kOverrideKeys;
  }
}

double number(const Entry& e, std::string_view key) {
  const auto v = detail::parse_double(e.value);
  if (!v || !std::isfinite(*v))
    throw ConfigError(e.line, "malformed number for '" + std::string(key) + "': '" + e.value + "'");
  return *v;
}

int count(const Entry& e, std::string_view key) {
  const auto v = detail::parse_integer(e.value);
  if (!v || *v < 0 || *v > 1'000'000)
    throw ConfigError(e.line, "malformed count for '" + std::string(key) + "': '" + e.value + "'");
  return static_cast<int>(*v);
}

double density_entry(const Entry& e) {
  try {
    return parse_density(e.value);
  } catch (const InvalidInput& ex) {
    throw ConfigError(e.line, ex.what());
  }
}

template <class Fn>
void with_entry(const Block& b, std::string_view key, Fn fn) {
  if (auto it = b.entries.find(key); it != b.entries.end()) fn(it->second);
}

const Entry& required(const Block& b, std::string_view key, std::string_view section) {
  auto it = b.entries.find(key);
  if (it == b.entries.end())
    throw ConfigError(b.header_line, "missing required key '" + std::string(key) + "' in [" +
                                         std::string(section) + "]");
  return it->second;
}

MaterialLayer build_layer(const Block& b, std::size_t index) {
  MaterialLayer layer;
  layer.name = "layer" + std::to_string(index + 1);
  with_entry(b, "name", [&](const Entry& e) { layer.name = e.value; });
  layer.thickness = number(required(b, "thickness", "layer"), "thickness");
  layer.young_modulus = number(required(b, "young_modulus", "layer"), "young_modulus");
  layer.poisson_ratio = number(required(b, "poisson_ratio", "layer"), "poisson_ratio");
  layer.density = density_entry(required(b, "density", "layer"));
  try {
    layer.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(b.header_line, e.what());
  }
  return layer;
}

}  // namespace

double parse_density(std::string_view text) {
  auto s = detail::trim(text);
  double scale = 1.0;
  auto strip = [&](std::string_view suffix, double factor) {
    if (s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix) {
      s = detail::trim(s.substr(0, s.size() - suffix.size()));
      scale = factor;
      return true;
    }
    return false;
  };
  if (!strip("kg/m3", 1.0)) strip("g/cm3", 1000.0);
  const auto v = detail::parse_double(s);
  if (!v || !std::isfinite(*v))
    throw InvalidInput("malformed density '" + std::string(text) + "'");
  return *v * scale;
}

std::vector<CalibrationPoint> parse_calibration_points(std::string_view text) {
  std::vector<CalibrationPoint> out;
  detail::for_each_line(text, [&](int number, std::string_view line) {
    const auto fields = detail::split_ws(detail::strip_comment(line));
    if (fields.empty()) return;
    if (fields.size() != 2) throw ConfigError(number, "expected 'density frequency_hz'");
    double density = 0.0;
    try {
      density = parse_density(fields[0]);
    } catch (const InvalidInput& e) {
      throw ConfigError(number, e.what());
    }
    const auto f = detail::parse_double(fields[1]);
    if (!f || !(*f > 0.0))
      throw ConfigError(number, "malformed frequency '" + std::string(fields[1]) + "'");
    out.push_back({density, *f});
  });
  return out;
}

CompositePlate DeviceConfig::plate() const {
  if (layers.empty()) throw InvalidInput("device has no layers");
  return CompositePlate(layers, overrides);
}

DeviceConfig parse_device_config(std::string_view text) {
  std::vector<Block> blocks;
  detail::for_each_line(text, [&](int number, std::string_view raw) {
    const auto line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) return;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(number, "malformed section header");
      const auto name = detail::trim(line.substr(1, line.size() - 2));
      const auto it = kSections.find(name);
      if (it == kSections.end())
        throw ConfigError(number, "unknown section [" + std::string(name) + "]");
      if (it->second != Section::kLayer) {
        for (const auto& b : blocks)
          if (b.section == it->second)
            throw ConfigError(number, "duplicate section [" + std::string(name) + "]");
      }
      blocks.push_back({it->second, number, {}});
      return;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(number, "expected 'key = value'");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (blocks.empty()) throw ConfigError(number, "key '" + std::string(key) + "' outside a section");
    auto& block = blocks.back();
    if (!keys_for(block.section).contains(key))
      throw ConfigError(number, "unknown key '" + std::string(key) + "'");
    if (value.empty()) throw ConfigError(number, "empty value for '" + std::string(key) + "'");
    if (!block.entries.emplace(std::string(key), Entry{std::string(value), number}).second)
      throw ConfigError(number, "duplicate key '" + std::string(key) + "'");
  });

  DeviceConfig cfg;
  const Block* geometry = nullptr;
  for (const auto& b : blocks) {
    switch (b.section) {
      case Section::kLayer:
        cfg.layers.push_back(build_layer(b, cfg.layers.size()));
        break;
      case Section::kGeometry:
        geometry = &b;
        break;
      case Section::kCom: {
        auto& c = cfg.com;
        with_entry(b, "velocity", [&](const Entry& e) { c.free_velocity = number(e, "velocity"); });
        double r = std::abs(c.strip_reflectivity);
        double r_phase = std::arg(c.strip_reflectivity);
        with_entry(b, "strip_reflectivity", [&](const Entry& e) { r = number(e, "strip_reflectivity"); });
        with_entry(b, "strip_reflectivity_phase_deg", [&](const Entry& e) {
          r_phase = number(e, "strip_reflectivity_phase_deg") * kDegree;
        });
        c.strip_reflectivity = std::polar(r, r_phase);
        with_entry(b, "reflection_phase_deg", [&](const Entry& e) {
          c.reflection_phase = number(e, "reflection_phase_deg") * kDegree;
        });
        with_entry(b, "transduction_strength", [&](const Entry& e) {
          c.transduction_strength = number(e, "transduction_strength");
        });
        with_entry(b, "capacitance_per_pair", [&](const Entry& e) {
          c.static_capacitance_per_pair = number(e, "capacitance_per_pair");
        });
        with_entry(b, "attenuation", [&](const Entry& e) { c.attenuation = number(e, "attenuation"); });
        with_entry(b, "load_resistance",
                   [&](const Entry& e) { c.load_resistance = number(e, "load_resistance"); });
        try {
          c.validate();
        } catch (const InvalidInput& e) {
          throw ConfigError(b.header_line, e.what());
        }
        break;
      }
      case Section::kOverride: {
        auto& o = cfg.overrides;
        with_entry(b, "young_modulus", [&](const Entry& e) { o.young_modulus = number(e, "young_modulus"); });
        with_entry(b, "poisson_ratio", [&](const Entry& e) { o.poisson_ratio = number(e, "poisson_ratio"); });
        with_entry(b, "plate_modulus", [&](const Entry& e) { o.plate_modulus = number(e, "plate_modulus"); });
        with_entry(b, "mass_per_area", [&](const Entry& e) { o.mass_per_area = number(e, "mass_per_area"); });
        with_entry(b, "bending_term", [&](const Entry& e) { o.bending_term = number(e, "bending_term"); });
        break;
      }
      case Section::kNone:
        break;
    }
  }

  if (!geometry) throw ConfigError(0, "missing [geometry] section (wavelength is required)");
  auto& g = cfg.geometry;
  const Block& gb = *geometry;
  g.wavelength = number(required(gb, "wavelength", "geometry"), "wavelength");
  with_entry(gb, "idt_pairs", [&](const Entry& e) { g.idt_pairs = count(e, "idt_pairs"); });
  with_entry(gb, "grating_strips", [&](const Entry& e) { g.grating_strips = count(e, "grating_strips"); });
  with_entry(gb, "overlap", [&](const Entry& e) { g.overlap = number(e, "overlap"); });
  with_entry(gb, "idt_separation", [&](const Entry& e) { g.idt_separation = number(e, "idt_separation"); });
  with_entry(gb, "metallization_ratio",
             [&](const Entry& e) { g.metallization_ratio = number(e, "metallization_ratio"); });
  with_entry(gb, "spacing_index", [&](const Entry& e) { cfg.spacing_index = count(e, "spacing_index"); });
  if (gb.entries.contains("grating_gap") && gb.entries.contains("spacing_index"))
    throw ConfigError(gb.entries.find("grating_gap")->second.line,
                      "grating_gap and spacing_index are mutually exclusive");
  try {
    if (!(g.wavelength > 0.0)) throw InvalidInput("wavelength must be > 0");
    g.grating_gap = design_spacing(cfg.spacing_index, g.wavelength);
    with_entry(gb, "grating_gap", [&](const Entry& e) { g.grating_gap = number(e, "grating_gap"); });
    g.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(gb.header_line, e.what());
  }

  if (!cfg.layers.empty()) {
    try {
      (void)cfg.plate();
    } catch (const InvalidInput& e) {
      throw ConfigError(0, e.what());
    }
  }
  return cfg;
}

std::string_view bundled_device_config() {
  return R"(# Two-port FPW resonator on a SiNx / PZT membrane.
# Pt/Ti electrodes are left out of the stack (negligible mass); the LSMO
# buffer is lumped into the PZT layer with PZT properties.

[layer]
name = SiNx
thickness = 1.2e-6
young_modulus = 3.85e11
poisson_ratio = 0.27
density = 3100

[layer]
name = PZT+LSMO
thickness = 1.1e-6
young_modulus = 8.6e10
poisson_ratio = 0.25
density = 7600

[geometry]
wavelength = 40e-6
idt_pairs = 20
grating_strips = 40
overlap = 50
idt_separation = 10
spacing_index = 0
metallization_ratio = 0.5

[com]
# free velocity of the bulk-PZT reference resonator
velocity = 2400
# placeholder: strip reflectivity on sol-gel PZT is not known
strip_reflectivity = 0.02
reflection_phase_deg = 0

[override]
# published areal mass; the layer sum gives 0.01208
mass_per_area = 0.1176
)";
}

}  // namespace fpw
