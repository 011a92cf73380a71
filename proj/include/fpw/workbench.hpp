#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fpw/com_resonator.hpp"
#include "fpw/liquid_sensing.hpp"
#include "fpw/plate_materials.hpp"

namespace fpw {

/// Parsed device description. Line-oriented `key = value` pairs grouped in
/// `[layer]`, `[geometry]`, `[com]` and `[override]` sections; each `[layer]`
/// section appends one layer to the stack, top to bottom. Values are SI;
/// densities also accept a `g/cm3` suffix. Unknown keys are errors.
struct DeviceConfig {
  std::vector<MaterialLayer> layers;
  PlateOverrides overrides;
  DeviceGeometry geometry;
  int spacing_index = 0;  // grating gap = design_spacing(spacing_index) unless set explicitly
  ComParameters com;

  /// Throws InvalidInput for an empty stack.
  CompositePlate plate() const;
};

DeviceConfig parse_device_config(std::string_view text);

/// The device from the published design: SiNx / PZT+LSMO stack, 40 um
/// wavelength, 20 IDT pairs, 40 grating strips, 50 lambda overlap, 10 lambda
/// separation, plus the published areal mass as an override.
std::string_view bundled_device_config();

/// Parses a density with an optional `g/cm3` or `kg/m3` suffix into kg/m^3.
double parse_density(std::string_view text);

/// Reads `density frequency_hz` lines (density per parse_density).
std::vector<CalibrationPoint> parse_calibration_points(std::string_view text);

struct RunResult {
  std::string command;
  std::vector<std::string> output_files;
  std::vector<std::string> summary;
  int exit_status = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (args[0] is the program name). Summary lines
/// go to `out`, diagnostics to `err`.
RunResult run_workbench(const std::vector<std::string>& args, std::ostream& out,
                        std::ostream& err);

}  // namespace fpw
