#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fpw/errors.hpp"
#include "fpw/workbench.hpp"

using namespace fpw;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::filesystem::path kData{FPW_DATA_DIR};

struct Run {
  int status;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fpwsim");
  std::ostringstream out, err;
  const auto r = run_workbench(args, out, err);
  return {r.exit_status, out.str(), err.str()};
}

int config_error_line(const std::string& text) {
  try {
    (void)parse_device_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

const char* kMinimal =
    "[layer]\n"
    "name = a\n"
    "thickness = 1e-6\n"
    "young_modulus = 1e11\n"
    "poisson_ratio = 0.3\n"
    "density = 3000\n"
    "[geometry]\n"
    "wavelength = 40e-6\n";

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "fpw_workbench_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("bundled device config") {
  CHECK(read_file(kData / "paper_device.cfg") == bundled_device_config());
  const auto cfg = parse_device_config(bundled_device_config());
  REQUIRE(cfg.layers.size() == 2);
  CHECK(cfg.layers[0].name == "SiNx");
  CHECK(cfg.layers[0].thickness == 1.2e-6);
  CHECK(cfg.layers[0].young_modulus == 3.85e11);
  CHECK(cfg.layers[0].poisson_ratio == 0.27);
  CHECK(cfg.layers[0].density == 3100.0);
  CHECK(cfg.layers[1].name == "PZT+LSMO");
  CHECK(cfg.layers[1].density == 7600.0);
  CHECK(cfg.geometry.wavelength == 40e-6);
  CHECK(cfg.geometry.idt_pairs == 20);
  CHECK(cfg.geometry.grating_strips == 40);
  CHECK(cfg.geometry.overlap == 50.0);
  CHECK(cfg.geometry.idt_separation == 10.0);
  CHECK(cfg.geometry.grating_gap == doctest::Approx(5e-6).epsilon(1e-15));
  CHECK(cfg.com.free_velocity == 2400.0);
  CHECK(std::abs(cfg.com.strip_reflectivity) == doctest::Approx(0.02));
  CHECK(cfg.overrides.mass_per_area == 0.1176);
  CHECK(cfg.plate().mass_per_area() == 0.1176);
  CHECK(cfg.plate().computed_mass_per_area() == doctest::Approx(0.01208).epsilon(1e-12));
}

TEST_CASE("device config parsing") {
  SUBCASE("minimal config takes defaults") {
    const auto cfg = parse_device_config(kMinimal);
    CHECK(cfg.layers.size() == 1);
    CHECK(cfg.geometry.idt_pairs == 20);
    CHECK(cfg.geometry.grating_gap == doctest::Approx(5e-6));
    CHECK_FALSE(cfg.overrides.any());
  }

  SUBCASE("spacing index selects the design spacing") {
    const auto cfg = parse_device_config(std::string(kMinimal) + "spacing_index = 2\n");
    CHECK(cfg.geometry.grating_gap == doctest::Approx(45e-6));
  }

  SUBCASE("densities accept g/cm3") {
    std::string text = kMinimal;
    text.replace(text.find("3000"), 4, "3.0 g/cm3");
    CHECK(parse_device_config(text).layers[0].density == doctest::Approx(3000.0));
  }

  SUBCASE("comments and blank lines") {
    const auto cfg = parse_device_config("# top\n\n" + std::string(kMinimal) + "  # end\n");
    CHECK(cfg.geometry.wavelength == 40e-6);
  }

  SUBCASE("misspelt key names its line") {
    std::string text = kMinimal;
    text.replace(text.find("wavelength"), 10, "wavelenght");
    CHECK(config_error_line(text) == 8);
    try {
      (void)parse_device_config(text);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("wavelenght") != std::string::npos);
    }
  }

  SUBCASE("errors carry line numbers") {
    const std::string m = kMinimal;
    CHECK(config_error_line(m + "idt_pairs = 20\nidt_pairs = 30\n") == 10);
    CHECK(config_error_line(m + "idt_pairs = twenty\n") == 9);
    CHECK(config_error_line(m + "idt_pairs = 2.5\n") == 9);
    CHECK(config_error_line(m + "overlap\n") == 9);
    CHECK(config_error_line(m + "overlap =\n") == 9);
    CHECK(config_error_line(m + "[bogus]\n") == 9);
    CHECK(config_error_line(m + "[geometry\n") == 9);
    CHECK(config_error_line(m + "[geometry]\n") == 9);
    CHECK(config_error_line("wavelength = 1\n") == 1);
    CHECK(config_error_line(m + "grating_gap = 1e-6\nspacing_index = 1\n") == 9);
  }

  SUBCASE("missing required keys") {
    std::string text = kMinimal;
    text.erase(text.find("density = 3000\n"), 15);
    CHECK(config_error_line(text) == 1);
    CHECK(config_error_line("[layer]\nname = a\nthickness = 1e-6\nyoung_modulus = 1e11\n"
                            "poisson_ratio = 0.3\ndensity = 3000\n") == 0);
  }

  SUBCASE("out-of-range values") {
    std::string text = kMinimal;
    text.replace(text.find("0.3"), 3, "0.5");
    CHECK_THROWS_AS(parse_device_config(text), ConfigError);
    CHECK_THROWS_AS(parse_device_config(std::string(kMinimal) + "[com]\nstrip_reflectivity = 0.5\n"),
                    ConfigError);
  }

  SUBCASE("empty stack") {
    const auto cfg = parse_device_config("[geometry]\nwavelength = 40e-6\n");
    CHECK(cfg.layers.empty());
    CHECK_THROWS_AS(cfg.plate(), InvalidInput);
  }
}

TEST_CASE("density and calibration parsing") {
  CHECK(parse_density("1000") == 1000.0);
  CHECK(parse_density("1000kg/m3") == 1000.0);
  CHECK(parse_density("0.787g/cm3") == doctest::Approx(787.0));
  CHECK(parse_density(" 1.2 g/cm3 ") == doctest::Approx(1200.0));
  CHECK_THROWS_AS(parse_density("heavy"), InvalidInput);
  CHECK_THROWS_AS(parse_density("1.0 lb/ft3"), InvalidInput);

  const auto pts = parse_calibration_points(read_file(kData / "calibration_points.txt"));
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].density == doctest::Approx(787.0));
  CHECK(pts[0].frequency == 4.94e6);
  CHECK(pts[2].density == doctest::Approx(1200.0));

  try {
    (void)parse_calibration_points("1000 4.75e6\n\n1000\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("CLI: plate report") {
  const auto r = run({"plate"});
  CHECK(r.status == 0);
  CHECK(r.out ==
        "layers = 2\n"
        "layer = SiNx\n"
        "layer = PZT+LSMO\n"
        "total_thickness_m = 2.300000000e-06\n"
        "young_modulus_pa = 2.420000000e+11\n"
        "poisson_ratio = 2.604347826e-01\n"
        "plate_modulus_pa = 2.596082616e+11\n"
        "mass_per_area_computed_kg_m2 = 1.208000000e-02\n"
        "mass_per_area_override_kg_m2 = 1.176000000e-01\n"
        "flexural_rigidity_n_m = 2.632211432e-07\n"
        "wavelength_m = 4.000000000e-05\n"
        "bending_term_n_per_m = 6.494721385e+03\n");
  CHECK(run({"--config", (kData / "paper_device.cfg").string(), "plate"}).out == r.out);
}

TEST_CASE("CLI: dispersion") {
  const auto r = run({"dispersion", "--liquid", "water"});
  CHECK(r.status == 0);
  CHECK(r.out.find("resonant_frequency_hz = 5.719553314e+06\n") != std::string::npos);
  CHECK(r.out.find("verdict = density-sensing valid\n") != std::string::npos);

  const auto g = run({"dispersion", "--liquid", "glycerol"});
  CHECK(g.status == 0);
  CHECK(g.out.find("verdict = coupled - not invertible from frequency alone\n") != std::string::npos);

  const auto air = run({"dispersion"});
  CHECK(air.status == 0);
  CHECK(air.out.find("resonant_frequency_hz = 5.875118225e+06\n") != std::string::npos);

  CHECK(run({"dispersion", "--liquid", "mercury"}).status == 2);
  CHECK(run({"dispersion", "--tension", "-1"}).status == 2);

  const auto csv = scratch_dir() / "sweep.csv";
  const auto s = run({"dispersion", "--sweep-out", csv.string(), "--rho-min", "0.5g/cm3", "--rho-max",
                      "2000", "--rho-points", "4"});
  CHECK(s.status == 0);
  const std::string text = read_file(csv);
  CHECK(text.rfind("density_kg_m3,phase_velocity_m_s,frequency_hz\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

TEST_CASE("CLI: s21 writes identical CSVs on repeated runs") {
  const auto dir = scratch_dir();
  const auto a = run({"s21", "--bulk", "--points", "301", "--out", (dir / "a.csv").string()});
  const auto b = run({"s21", "--bulk", "--points", "301", "--out", (dir / "b.csv").string()});
  CHECK(a.status == 0);
  CHECK(b.status == 0);
  CHECK(a.out == b.out);
  const std::string csv = read_file(dir / "a.csv");
  CHECK(csv == read_file(dir / "b.csv"));
  CHECK(csv.rfind("f_hz,s21_re,s21_im,s21_db\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 302);
  CHECK(a.out.find("peak_frequency_hz = ") != std::string::npos);

  const auto f = run({"s21", "--fpw", "--liquid", "saline", "--points", "401"});
  CHECK(f.status == 0);
  CHECK(f.out.find("mode = fpw\n") != std::string::npos);

  CHECK(run({"s21"}).status == 2);
  CHECK(run({"s21", "--bulk", "--fpw"}).status == 2);
  CHECK(run({"s21", "--bulk", "--points", "1"}).status == 2);
  // A window on the flank of the response has no interior peak.
  CHECK(run({"s21", "--bulk", "--f-start", "60.1e6", "--f-stop", "60.2e6"}).status == 1);
}

TEST_CASE("CLI: fit and invert") {
  const std::string pts = (kData / "calibration_points.txt").string();
  const auto fit = run({"fit", "--points", pts});
  CHECK(fit.status == 0);
  CHECK(fit.out.find("slope_mhz_per_g_cm3 = -8.479397354e-01\n") != std::string::npos);

  const auto inv = run({"invert", "--freq", "4.75e6", "--points", pts});
  CHECK(inv.status == 0);
  CHECK(inv.out.find("density_kg_m3 = 1.007459958e+03\n") != std::string::npos);

  const auto model = run({"invert", "--freq", "5.7e6", "--model"});
  CHECK(model.status == 0);
  CHECK(model.out.find("method = model\n") != std::string::npos);

  CHECK(run({"invert", "--freq", "6.5e6", "--model"}).status == 2);
  CHECK(run({"invert", "--freq", "4.75e6"}).status == 2);

  const auto one = scratch_dir() / "one.txt";
  std::ofstream(one) << "1000 4.75e6\n";
  CHECK(run({"fit", "--points", one.string()}).status == 2);
}

TEST_CASE("CLI: usage and configuration errors") {
  CHECK(run({}).status == 2);
  CHECK(run({"frobnicate"}).status == 2);
  CHECK(run({"--help"}).status == 0);
  CHECK(run({"--config", "/nonexistent/device.cfg", "plate"}).status == 2);

  const auto bad = scratch_dir() / "bad.cfg";
  std::ofstream(bad) << "[geometry]\nwavelenght = 40e-6\n";
  const auto r = run({"--config", bad.string(), "plate"});
  CHECK(r.status == 2);
  CHECK(r.err.find("line 2") != std::string::npos);

  const auto lib = scratch_dir() / "liquids.txt";
  std::ofstream(lib) << "oil 900 0.05\n";
  CHECK(run({"--liquids", lib.string(), "dispersion", "--liquid", "oil"}).status == 0);
  CHECK(run({"--liquids", lib.string(), "dispersion", "--liquid", "water"}).status == 2);
}

TEST_CASE("CLI: compare") {
  const auto r = run({"compare"});
  CHECK(r.status == 0);
  CHECK(r.out.find("glycerol") != std::string::npos);
  CHECK(r.out.find("-37.04") != std::string::npos);
}
