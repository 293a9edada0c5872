#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "wigrav/errors.hpp"
#include "wigrav/params.hpp"

using namespace wigrav;

TEST_CASE("default parameters derive the coupling constant") {
  const Params p = Params::defaults();
  // 6.6743e-11 * (1e-14)^2 by hand.
  CHECK(p.kappa() == doctest::Approx(6.6743e-39).epsilon(1e-15));
  CHECK(p.alpha() == doctest::Approx(2.0 * 1e-10 / (1.054571817e-34 * 1.054571817e-34)).epsilon(1e-14));
  CHECK(p.beta() == doctest::Approx(1.0 / 2e-10).epsilon(1e-15));
}

TEST_CASE("normalization constant is four up to a negligible overlap") {
  const Params p = Params::defaults();
  // delta_x^2 / (8 sigma^2) = 625 / 8 = 78.125
  const double overlap = std::exp(-78.125);
  CHECK(overlap < 1e-33);
  CHECK(std::abs(p.norm_N() - 4.0) / 4.0 <= 1e-30 + 2.0 * overlap + 1e-16);
  CHECK(p.norm_N() == 4.0 * (1.0 + overlap) * (1.0 + overlap));
}

TEST_CASE("normalization constant lies in (4, 16] and decreases towards 4") {
  RawParams raw;
  raw.d_m = 1.0;
  double previous = 16.0;
  for (double ratio : {1.01, 1.5, 2.0, 3.0, 5.0, 8.0}) {
    raw.sigma_m = 1e-3;
    raw.delta_x_m = ratio * raw.sigma_m;
    const Params p = Params::derive(raw);
    CHECK(p.norm_N() > 4.0);
    CHECK(p.norm_N() <= 16.0);
    CHECK(p.norm_N() < previous);
    previous = p.norm_N();
  }
}

TEST_CASE("ordering sigma < delta_x < d is enforced") {
  RawParams raw;
  raw.sigma_m = 3e-4;
  CHECK_THROWS_AS(Params::derive(raw), OrderingViolation);
  raw = RawParams{};
  raw.delta_x_m = raw.d_m;
  CHECK_THROWS_AS(Params::derive(raw), OrderingViolation);
  raw = RawParams{};
  raw.sigma_m = raw.delta_x_m;
  CHECK_THROWS_AS(Params::derive(raw), OrderingViolation);
}

TEST_CASE("non-positive or non-finite inputs are rejected") {
  double RawParams::*fields[] = {&RawParams::m_kg,    &RawParams::delta_x_m, &RawParams::d_m,
                                 &RawParams::sigma_m, &RawParams::hbar_js,   &RawParams::G_si};
  for (auto field : fields) {
    for (double bad : {0.0, -1.0, std::nan(""), double(INFINITY)}) {
      RawParams raw;
      raw.*field = bad;
      CHECK_THROWS_AS(Params::derive(raw), NonPositive);
    }
  }
}

TEST_CASE("derive is deterministic") {
  const Params a = Params::defaults();
  const Params b = Params::defaults();
  CHECK(std::memcmp(&a.internal(), &b.internal(), sizeof(InternalConstants)) == 0);
  CHECK(a.kappa() == b.kappa());
  CHECK(a.norm_N() == b.norm_N());
}

TEST_CASE("internal constants") {
  const Params p = Params::defaults();
  const InternalConstants& k = p.internal();
  CHECK(k.alpha == 2.0);
  CHECK(k.beta == 0.5);
  CHECK(k.delta_x == doctest::Approx(25.0).epsilon(1e-15));
  CHECK(k.d == doctest::Approx(45.0).epsilon(1e-15));
  CHECK(k.gamma == k.delta_x);
  CHECK(k.mass == doctest::Approx(1e-14 * 1e-10 / 1.054571817e-34).epsilon(1e-14));
  CHECK(k.kappa == doctest::Approx(6.6743e-39 / (1.054571817e-34 * 1e-5)).epsilon(1e-14));
}

TEST_CASE("unit round trips stay within 1e-14") {
  const UnitSystem& u = Params::defaults().units();
  for (double x : {1e-9, -3.7e-5, 2.25e-4, 1.0}) {
    CHECK(std::abs(u.length_to_si(u.length_to_internal(x)) - x) <= 1e-14 * std::abs(x));
  }
  for (double q : {1e-31, -4.2e-30, 7e-29}) {
    CHECK(std::abs(u.momentum_to_si(u.momentum_to_internal(q)) - q) <= 1e-14 * std::abs(q));
  }
  for (int n : {1, 2}) {
    const double w = 3.3e33;
    CHECK(std::abs(u.density_to_si(u.density_to_internal(w, n), n) - w) <= 1e-14 * w);
  }
  CHECK(u.momentum_unit() == doctest::Approx(1.054571817e-34 / 1e-5).epsilon(1e-15));
  CHECK(u.action_unit() == 1.054571817e-34);
}

TEST_CASE("parameter file parsing") {
  std::istringstream in(
      "# tabletop\n"
      "m_kg = 2e-14\n"
      "  d_m=5e-4   # wider\n"
      "\n"
      "G_si = 6.674e-11\n");
  const RawParams raw = parse_params(in);
  CHECK(raw.m_kg == 2e-14);
  CHECK(raw.d_m == 5e-4);
  CHECK(raw.G_si == 6.674e-11);
  CHECK(raw.delta_x_m == RawParams{}.delta_x_m);
  CHECK(raw.sigma_m == RawParams{}.sigma_m);
}

TEST_CASE("parameter file errors") {
  {
    std::istringstream in("mass = 1e-14\n");
    CHECK_THROWS_AS(parse_params(in), ParamsFileError);
  }
  {
    std::istringstream in("m_kg = heavy\n");
    CHECK_THROWS_AS(parse_params(in), ParamsFileError);
  }
  {
    std::istringstream in("m_kg 1e-14\n");
    CHECK_THROWS_AS(parse_params(in), ParamsFileError);
  }
  CHECK_THROWS_AS(load_params_file("/nonexistent/params.txt"), ParamsFileError);
}

TEST_CASE("parameter file from disk") {
  const auto path = std::filesystem::temp_directory_path() / "wigrav_params_test.txt";
  {
    std::ofstream out(path);
    out << "sigma_m = 2e-5\nhbar_js = 1.0546e-34\n";
  }
  const RawParams raw = load_params_file(path);
  std::filesystem::remove(path);
  CHECK(raw.sigma_m == 2e-5);
  CHECK(raw.hbar_js == 1.0546e-34);
}
