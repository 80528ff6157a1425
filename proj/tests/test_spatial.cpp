#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "sas/errors.hpp"
#include "sas/rng.hpp"
#include "sas/spatial.hpp"

namespace {

sas::ApertureCurve curve_from(const sas::SpatialProfile& profile,
                              const std::vector<double>& radii,
                              sas::ApertureChannel ch = sas::ApertureChannel::AS) {
  sas::ApertureCurve c;
  c.channel = ch;
  for (double r : radii) c.points.push_back({r, sas::transmitted_fraction(profile, r)});
  return c;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (double r = lo; r <= hi + 1e-12; r += step) g.push_back(r);
  return g;
}

}  // namespace

TEST_CASE("transmitted fraction closed-form values") {
  const sas::SpatialProfile single{{{1.0, 2.0}}};
  CHECK(sas::transmitted_fraction(single, 0.0) == 0.0);
  CHECK(sas::transmitted_fraction(single, 2.0) ==
        doctest::Approx(0.39346934028736658).epsilon(1e-12));

  const sas::SpatialProfile two{{{0.5, 1.0}, {0.5, 3.0}}};
  CHECK(sas::transmitted_fraction(two, 1.0) ==
        doctest::Approx(0.22375493569030058).epsilon(1e-12));
}

TEST_CASE("profile validation") {
  CHECK_THROWS_AS((sas::SpatialProfile{}.validate()), sas::data_error);
  CHECK_THROWS_AS((sas::SpatialProfile{{{1.0, -2.0}}}.validate()), sas::data_error);
  CHECK_THROWS_AS((sas::SpatialProfile{{{0.6, 1.0}, {0.6, 2.0}}}.validate()), sas::data_error);
  CHECK_NOTHROW(sas::SpatialProfile{{{0.4, 1.0}, {0.6, 2.0}}}.validate());
}

TEST_CASE("transmitted fraction is monotone and bounded for random profiles") {
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const sas::PhiloxBlock b = sas::philox4x64({trial, 0, 0, 0}, {31337, 0});
    const int n = 1 + static_cast<int>(b.v[3] % 3);
    sas::SpatialProfile p;
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double w = 0.1 + sas::uniform_from_bits(b.v[static_cast<std::size_t>(i)]);
      p.components.push_back({w, 0.2 + 5.0 * sas::uniform_from_bits(
                                        sas::philox4x64({trial, 7, static_cast<std::uint64_t>(i),
                                                         0},
                                                        {31337, 0})
                                            .v[0])});
      wsum += w;
    }
    for (auto& c : p.components) c.weight /= wsum;
    p.validate();

    double prev = sas::transmitted_fraction(p, 0.0);
    CHECK(prev == 0.0);
    double sigma_max = 0.0;
    for (const auto& c : p.components) sigma_max = std::max(sigma_max, c.sigma_mm);
    for (double r = 0.1; r < 8.0 * sigma_max; r += 0.1 * sigma_max) {
      const double f = sas::transmitted_fraction(p, r);
      CHECK(f >= prev);
      CHECK(f <= 1.0);
      prev = f;
    }
    CHECK(sas::transmitted_fraction(p, 50.0 * sigma_max) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("aperture curve validation") {
  sas::ApertureCurve c;
  c.points = {{1.0, 0.1}, {0.5, 0.2}};
  CHECK_THROWS_AS(c.validate(), sas::data_error);
  c.points = {{0.5, 0.3}, {1.0, 0.1}};  // transmitted power cannot drop
  CHECK_THROWS_AS(c.validate(), sas::data_error);
  c.points = {{0.5, 0.3}, {1.0, 1.4}};
  CHECK_THROWS_AS(c.validate(), sas::data_error);
  c.points = {{0.5, 0.3}, {1.0, 0.8}};
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("single-gaussian fit recovers sigma on clean data") {
  const sas::SpatialProfile truth{{{1.0, 2.0}}};
  const auto curve = curve_from(truth, grid(0.4, 8.0, 0.4));
  const auto [profile, fr] = sas::fit_profile(curve, 1);
  REQUIRE(fr.converged);
  REQUIRE(profile.components.size() == 1);
  CHECK(std::abs(profile.components[0].sigma_mm - 2.0) < 1e-3);
  CHECK(fr.find("sigma") != nullptr);
  CHECK(fr.find("sigma")->value == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(fr.residual_norm < 1e-8);
}

TEST_CASE("two-gaussian fit recovers all four parameters within 2 percent") {
  sas::SpatialProfile truth;
  truth.components = {{0.3, 1.0}, {0.7, 4.0}};
  const auto curve = curve_from(truth, grid(0.25, 10.0, 0.25));
  const auto [profile, fr] = sas::fit_profile(curve, 2);
  REQUIRE(fr.converged);
  REQUIRE(profile.components.size() == 2);
  // components come back narrow-first
  CHECK(std::abs(profile.components[0].sigma_mm - 1.0) / 1.0 < 0.02);
  CHECK(std::abs(profile.components[0].weight - 0.3) / 0.3 < 0.02);
  CHECK(std::abs(profile.components[1].sigma_mm - 4.0) / 4.0 < 0.02);
  CHECK(std::abs(profile.components[1].weight - 0.7) / 0.7 < 0.02);
  CHECK(fr.find("sigma_1")->value == doctest::Approx(1.0).epsilon(0.02));
  CHECK(fr.find("weight_2")->value == doctest::Approx(0.7).epsilon(0.02));
}

TEST_CASE("round trip through transmitted_fraction at several widths") {
  for (double sigma : {0.7, 1.5, 3.0, 5.0}) {
    sas::SpatialProfile truth{{{1.0, sigma}}};
    const auto curve = curve_from(truth, grid(0.3 * sigma, 5.0 * sigma, 0.2 * sigma));
    const auto [profile, fr] = sas::fit_profile(curve, 1);
    REQUIRE(fr.converged);
    CHECK(std::abs(profile.components[0].sigma_mm - sigma) / sigma < 1e-6);
  }
}

TEST_CASE("a flat curve is degenerate and reported as a failed fit") {
  sas::ApertureCurve c;
  for (double r = 1.0; r <= 12.0; r += 1.0) c.points.push_back({r, 1.0});
  const auto [profile, fr] = sas::fit_profile(c, 1);
  CHECK_FALSE(fr.converged);
  for (const auto& p : fr.parameters) CHECK_FALSE(p.identifiable);
}

TEST_CASE("too few points for the parameter count") {
  sas::ApertureCurve c;
  c.points = {{1.0, 0.2}, {2.0, 0.5}};
  CHECK_THROWS_AS(sas::fit_profile(c, 1), sas::data_error);
  sas::SpatialProfile two;
  two.components = {{0.5, 1.0}, {0.5, 3.0}};
  const auto short_curve = curve_from(two, grid(1.0, 8.0, 1.0));  // 8 points, need 9
  CHECK_THROWS_AS(sas::fit_profile(short_curve, 2), sas::data_error);
}

TEST_CASE("ratio of identical curves is one") {
  const sas::SpatialProfile p{{{1.0, 2.5}}};
  const auto c = curve_from(p, grid(0.5, 6.0, 0.5));
  const auto rc = sas::ratio_curve(c, c);
  CHECK(rc.omitted_radii.empty());
  for (const auto& [r, v] : rc.points) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("narrow correlated component pushes the ratio down at small radii") {
  const sas::SpatialProfile s_prof{{{1.0, 4.0}}};
  sas::SpatialProfile as_prof;
  as_prof.components = {{0.8, 4.0}, {0.2, 1.0}};
  const auto radii = grid(0.5, 8.0, 0.5);
  const auto rc = sas::ratio_curve(curve_from(s_prof, radii), curve_from(as_prof, radii));
  REQUIRE(rc.points.size() == radii.size());
  CHECK(rc.points.front().second == doctest::Approx(0.2617907337281426).epsilon(1e-12));
  CHECK(rc.points.back().second == doctest::Approx(0.96964663876022528).epsilon(1e-12));
  for (std::size_t i = 1; i < rc.points.size(); ++i)
    CHECK(rc.points[i].second > rc.points[i - 1].second);
}

TEST_CASE("ratio monotonicity holds for random narrow+wide decompositions") {
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const sas::PhiloxBlock b = sas::philox4x64({trial, 1, 0, 0}, {555, 0});
    const double sigma_narrow = 0.5 + 1.5 * sas::uniform_from_bits(b.v[0]);
    const double sigma_wide = 2.5 + 3.5 * sas::uniform_from_bits(b.v[1]);
    const double w = 0.05 + 0.55 * sas::uniform_from_bits(b.v[2]);
    const sas::SpatialProfile s_prof{{{1.0, sigma_wide}}};
    sas::SpatialProfile as_prof;
    as_prof.components = {{w, sigma_narrow}, {1.0 - w, sigma_wide}};
    const auto radii = grid(0.1, 15.0, 0.1);
    const auto rc = sas::ratio_curve(curve_from(s_prof, radii), curve_from(as_prof, radii));
    for (std::size_t i = 1; i < rc.points.size(); ++i)
      CHECK(rc.points[i].second >= rc.points[i - 1].second - 1e-12);
  }
}

TEST_CASE("zero anti-Stokes points are omitted and flagged") {
  sas::ApertureCurve s, as;
  s.points = {{0.5, 0.1}, {1.0, 0.3}, {2.0, 0.6}};
  as.points = {{0.5, 0.0}, {1.0, 0.2}, {2.0, 0.5}};
  const auto rc = sas::ratio_curve(s, as);
  REQUIRE(rc.omitted_radii.size() == 1);
  CHECK(rc.omitted_radii[0] == 0.5);
  REQUIRE(rc.points.size() == 2);
  CHECK(rc.points[0].second == doctest::Approx(1.5));
}

TEST_CASE("mismatched radius grids are rejected") {
  sas::ApertureCurve s, as;
  s.points = {{0.5, 0.1}, {1.0, 0.3}};
  as.points = {{0.5, 0.1}, {1.5, 0.3}};
  CHECK_THROWS_AS(sas::ratio_curve(s, as), sas::data_error);
  as.points = {{0.5, 0.1}};
  CHECK_THROWS_AS(sas::ratio_curve(s, as), sas::data_error);
}
