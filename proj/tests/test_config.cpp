#include <cmath>
#include <numbers>
#include <string>

#include "dampwave/config.hpp"
#include "dampwave/error.hpp"
#include "doctest.h"

using namespace dampwave;

namespace {

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.line;
  }
  return -1;
}

std::string error_text(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal config gets the defaults") {
  const ExperimentConfig c = parse_config("geometry.domain = square\ndamping.family = linear\n");
  CHECK(c.geometry.domain.shape == DomainSpec::Shape::rectangle);
  CHECK(c.geometry.domain.width == 1.0);
  CHECK(c.geometry.domain.height == 1.0);
  CHECK(c.geometry.epsilon == 0.25);
  CHECK(c.geometry.omega == OmegaKind::mgc);
  CHECK(c.geometry.x0.x == -1.0);
  CHECK(c.solver.h == 1.0 / 32.0);
  CHECK_FALSE(c.solver.dt.has_value());
  CHECK(c.dt() == doctest::Approx(0.9 / 32.0 / std::numbers::sqrt2));
  CHECK(c.solver.horizon == 10.0);
  CHECK(c.solver.stride == 10);
  CHECK(c.disturbance.scales == std::vector<double>{0.0, 1.0});
  CHECK(c.fit_start() == 5.0);
  CHECK(c.fit_end() == 10.0);
  CHECK(c.output.dir == "out");
  CHECK(c.entries.size() == 2);
  CHECK(c.digest.size() == 16);
  CHECK(c.damping.law().family() == DampingFamily::linear);
}

TEST_CASE("full config with fractions and rules") {
  const std::string text = R"(# a comment line
geometry.domain = rectangle
geometry.width = 2
geometry.height = 1
geometry.x0 = -0.5, 3
geometry.profile = smooth
damping.family = cubic
disturbance.d_time = pulse(0, 5)
disturbance.d_space = gaussian(0.85, 0.85, 0.1, 0.5)
disturbance.e_time = exp(2, 4)
disturbance.e_space = eigenmode(2, 1)
disturbance.scales = 0, 0.5, 1, 2
solver.h = 1/64
solver.dt = 0.9/64/1.5   # chained fraction
solver.horizon = 3
solver.initial_u = gaussian(0.5, 0.5, 0.1, 2)
solver.backend = reference
experiment.seed = 7
)";
  const ExperimentConfig c = parse_config(text);
  CHECK(c.geometry.domain.width == 2.0);
  CHECK(c.geometry.x0.y == 3.0);
  CHECK(c.geometry.profile == LocalizationProfile::smooth);
  CHECK(c.solver.h == 1.0 / 64.0);
  CHECK(c.dt() == doctest::Approx(0.9 / 64.0 / 1.5));
  CHECK(c.disturbance.spec.d.time.kind == TimeProfile::Kind::pulse);
  CHECK(c.disturbance.spec.d.time.t1 == 5.0);
  CHECK(c.disturbance.spec.e.time.t_off == 4.0);
  CHECK(c.disturbance.spec.e.space.k == 2);
  CHECK(c.disturbance.scales.size() == 4);
  CHECK(c.solver.initial_u.kind == InitialRule::Kind::gaussian);
  CHECK(c.solver.backend == kernels::Backend::reference);
  CHECK(c.seed == 7);
}

TEST_CASE("numbers") {
  CHECK(parse_number("1/64") == 1.0 / 64.0);
  CHECK(parse_number("8/4/2") == 1.0);
  CHECK(parse_number("2.5e-3") == 2.5e-3);
  CHECK(parse_number(" -3 ") == -3.0);
  CHECK_THROWS(parse_number("abc"));
  CHECK_THROWS(parse_number("1/0"));
  CHECK_THROWS(parse_number(""));
}

TEST_CASE("CFL violation is a parse error on the dt line") {
  const std::string text = "solver.h = 0.05\nsolver.dt = 0.1\n";
  CHECK(error_line(text) == 2);
  CHECK(error_text(text).find("CFL") != std::string::npos);
  CHECK_NOTHROW(parse_config("solver.h = 0.05\nsolver.dt = 0.03\n"));
}

TEST_CASE("duplicate keys name both lines") {
  const std::string text = "solver.h = 1/32\n\nsolver.horizon = 4\nsolver.h = 1/64\n";
  CHECK(error_line(text) == 4);
  const std::string msg = error_text(text);
  CHECK(msg.find("line 1") != std::string::npos);
  CHECK(msg.find("line 4") != std::string::npos);
}

TEST_CASE("malformed input") {
  CHECK(error_line("solver.h = 1/32\nsolver.bogus = 3\n") == 2);
  CHECK(error_line("solver.stride = abc\n") == 1);
  CHECK(error_line("solver.stride = 0\n") == 1);
  CHECK(error_line("geometry.domain = triangle\n") == 1);
  CHECK(error_line("just some text\n") == 1);
  CHECK(error_line("solver.h =\n") == 1);
  CHECK(error_line("disturbance.d_time = pulse(3, 1)\n") == 1);
  CHECK(error_line("geometry.require_mgc = maybe\n") == 1);
  CHECK(error_line("analysis.gn_q = 2\n") == 1);
  CHECK(error_line("disturbance.scales = 0, -1\n") == 1);
}

TEST_CASE("digest is stable under reordering and sensitive to values") {
  const ExperimentConfig a = parse_config("solver.h = 1/32\nsolver.horizon = 4\ndamping.family = cubic\n");
  const ExperimentConfig b = parse_config("damping.family = cubic\n# comment\nsolver.horizon   =   4\nsolver.h = 1/32\n");
  const ExperimentConfig c = parse_config("solver.h = 1/32\nsolver.horizon = 5\ndamping.family = cubic\n");
  CHECK(a.digest == b.digest);
  CHECK(a.digest != c.digest);
  CHECK(config_digest(a.entries) == a.digest);
}

TEST_CASE("rule grammar") {
  CHECK(parse_time_rule("zero").kind == TimeProfile::Kind::zero);
  CHECK(parse_time_rule("exp(0.5)").lambda == 0.5);
  CHECK(parse_space_rule("constant(2)").value == 2.0);
  CHECK(parse_space_rule("eigenmode(1, 3, 0.5)").amplitude == 0.5);
  CHECK(parse_initial_rule("zero").kind == InitialRule::Kind::zero);
  CHECK_THROWS(parse_time_rule("ramp(1)"));
  CHECK_THROWS(parse_space_rule("gaussian(1, 2)"));
  CHECK_THROWS(parse_initial_rule("eigenmode(0, 1)"));
}

TEST_CASE("every documented key is known to the parser") {
  for (const auto& [key, value] : config_keys()) {
    // some defaults are descriptive ("auto", "family default"); only the key matters here
    const std::string msg = error_text(key + " = 1\n");
    CHECK_MESSAGE(msg.find("unknown key") == std::string::npos, key);
  }
  CHECK(error_text("solver.nope = 1\n").find("unknown key") != std::string::npos);
}
