#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "sas/errors.hpp"
#include "sas/montecarlo.hpp"

namespace {

sas::LaserConfig reference_laser() {
  return {633.0, 200e-15, 76e6, 0.040};
}

sas::MaterialModel flat_material(double level_cps) {
  std::vector<sas::SpectrumPoint> sp;
  for (double x = 100.0; x <= 2600.0; x += 25.0) sp.push_back({x, level_cps});
  return sas::make_two_band_material("flat", sp, 295.0, 1332.0, 2500.0,
                                     1.2530474693388645e7, 1.1411798189632639e6,
                                     5.75e-22, 3.35e-21);
}

double binomial_sigma(double n, double p) { return std::sqrt(n * p * (1.0 - p)); }

}  // namespace

TEST_CASE("probability validation") {
  CHECK_NOTHROW(sas::ChannelProbabilities{0.1, 0.2, 0.3}.validate());
  CHECK_THROWS_AS((sas::ChannelProbabilities{-0.1, 0.0, 0.0}.validate()), sas::data_error);
  CHECK_THROWS_AS((sas::ChannelProbabilities{0.0, 0.0, 1.5}.validate()), sas::data_error);
  CHECK_THROWS_AS((sas::ChannelProbabilities{0.8, 0.0, 0.4}.validate()), sas::data_error);
}

TEST_CASE("window rate integrates the spectrum over the window") {
  const sas::MaterialModel m = flat_material(400.0);
  sas::CollectionConfig col;  // resolution 26
  // flat spectrum, window exactly one resolution wide: rate = level
  CHECK(sas::window_rate_cps(m, col, 1319.0, 1345.0) == doctest::Approx(400.0).epsilon(1e-12));
  // half-resolution window collects half the counts
  CHECK(sas::window_rate_cps(m, col, 1319.0, 1332.0) == doctest::Approx(200.0).epsilon(1e-12));

  // linear spectrum: trapezoid is exact, edges interpolated
  sas::MaterialModel lin = m;
  lin.spectrum.clear();
  for (double x = 0.0; x <= 30.0; x += 10.0) lin.spectrum.push_back({x, x});
  CHECK(sas::window_rate_cps(lin, col, 2.5, 7.5) == doctest::Approx(25.0 / 26.0).epsilon(1e-12));

  CHECK_THROWS_AS(sas::window_rate_cps(m, col, 50.0, 130.0), sas::data_error);
  CHECK_THROWS_AS(sas::window_rate_cps(m, col, 2590.0, 2610.0), sas::data_error);
  CHECK_THROWS_AS(sas::window_rate_cps(m, col, 1345.0, 1319.0), sas::data_error);
}

TEST_CASE("derived probabilities for the 35 kc/s window") {
  const sas::LaserConfig laser = reference_laser();
  const sas::MaterialModel m = flat_material(35000.0);
  sas::CollectionConfig col;
  const auto p = sas::derive_probabilities(laser, m, col, 1319.0, 1345.0);

  CHECK(p.p_s == doctest::Approx(35000.0 / 76e6).epsilon(1e-12));
  // anti-Stokes channel is thermally suppressed by n/(n+1) at the window center
  CHECK(p.p_as / p.p_s == doctest::Approx(1.5088078330021829e-3).epsilon(1e-9));
  // window centered on the band edge uses the 1st-order constants: 20 pairs/s
  CHECK(p.p_pair == doctest::Approx(20.0 / 76e6).epsilon(1e-9));
}

TEST_CASE("derived probabilities fold in detection efficiencies") {
  const sas::LaserConfig laser = reference_laser();
  const sas::MaterialModel m = flat_material(35000.0);
  sas::CollectionConfig col;
  const auto p0 = sas::derive_probabilities(laser, m, col, 1319.0, 1345.0);
  col.detection_efficiency_s = 0.5;
  col.detection_efficiency_as = 0.25;
  const auto p = sas::derive_probabilities(laser, m, col, 1319.0, 1345.0);
  CHECK(p.p_s == doctest::Approx(0.5 * p0.p_s).epsilon(1e-12));
  CHECK(p.p_as == doctest::Approx(0.25 * p0.p_as).epsilon(1e-12));
  CHECK(p.p_pair == doctest::Approx(0.125 * p0.p_pair).epsilon(1e-12));
}

TEST_CASE("unphysical configuration is rejected") {
  const sas::LaserConfig laser = reference_laser();
  const sas::MaterialModel m = flat_material(1e9);  // p_s would exceed 1
  sas::CollectionConfig col;
  CHECK_THROWS_AS(sas::derive_probabilities(laser, m, col, 1319.0, 1345.0), sas::data_error);
}

TEST_CASE("simulated singles counts sit within 5 sigma at several probabilities") {
  struct Case {
    double p;
    std::uint64_t n;
  };
  for (const Case c : {Case{1e-2, 1000000}, Case{1e-4, 1000000}, Case{1e-6, 10000000}}) {
    const sas::EventStream s =
        sas::simulate({c.p, c.p, 0.0}, c.n, 991 + static_cast<std::uint64_t>(c.p * 1e8), 76e6);
    s.validate();
    const double mean = static_cast<double>(c.n) * c.p;
    const double sig = binomial_sigma(static_cast<double>(c.n), c.p);
    CHECK(std::abs(static_cast<double>(s.count(sas::Channel::S)) - mean) < 5.0 * sig);
    CHECK(std::abs(static_cast<double>(s.count(sas::Channel::aS)) - mean) < 5.0 * sig);
  }
}

TEST_CASE("pair injection emits both channels in the same pulse") {
  const sas::EventStream s = sas::simulate({0.0, 0.0, 3e-3}, 500000, 17, 76e6);
  CHECK(s.count(sas::Channel::S) == s.count(sas::Channel::aS));
  CHECK(s.records.size() % 2 == 0);
  for (std::size_t i = 0; i < s.records.size(); i += 2) {
    CHECK(s.records[i].pulse_index == s.records[i + 1].pulse_index);
    CHECK(s.records[i].channel == sas::Channel::S);
    CHECK(s.records[i + 1].channel == sas::Channel::aS);
  }
  const double mean = 500000 * 3e-3;
  CHECK(std::abs(static_cast<double>(s.count(sas::Channel::S)) - mean) <
        5.0 * binomial_sigma(500000, 3e-3));
}

TEST_CASE("at most one record per pulse and channel") {
  const sas::EventStream s = sas::simulate({0.3, 0.3, 0.3}, 20000, 5, 76e6);
  s.validate();  // sortedness + uniqueness
  std::set<std::pair<std::uint64_t, sas::Channel>> seen;
  for (const auto& r : s.records) CHECK(seen.insert({r.pulse_index, r.channel}).second);
}

TEST_CASE("output is identical for any thread or block count") {
  const sas::ChannelProbabilities p{2e-3, 1e-3, 5e-4};
  // spans several internal blocks
  const std::uint64_t n = 3u << 20;
  const sas::EventStream s1 = sas::simulate(p, n, 404, 76e6, 1);
  const sas::EventStream s2 = sas::simulate(p, n, 404, 76e6, 2);
  const sas::EventStream s7 = sas::simulate(p, n, 404, 76e6, 7);
  CHECK(s1.records == s2.records);
  CHECK(s1.records == s7.records);
  CHECK(s1.records.size() > 0);
}

TEST_CASE("different seeds give different streams") {
  const sas::EventStream a = sas::simulate({1e-2, 0.0, 0.0}, 100000, 1, 76e6);
  const sas::EventStream b = sas::simulate({1e-2, 0.0, 0.0}, 100000, 2, 76e6);
  CHECK(a.records != b.records);
}

TEST_CASE("merge combines streams and collapses duplicates") {
  sas::EventStream a, b;
  a.n_pulses = b.n_pulses = 100;
  a.rep_rate_hz = b.rep_rate_hz = 76e6;
  a.seed = 5;
  b.seed = 9;
  a.records = {{2, sas::Channel::S}, {7, sas::Channel::aS}, {50, sas::Channel::S}};
  b.records = {{2, sas::Channel::S}, {7, sas::Channel::S}, {90, sas::Channel::aS}};
  const sas::EventStream m = sas::merge_streams(a, b);
  m.validate();
  CHECK(m.seed == (5ull ^ 9ull));
  REQUIRE(m.records.size() == 5);
  CHECK(m.records[0] == sas::EventRecord{2, sas::Channel::S});
  CHECK(m.records[1] == sas::EventRecord{7, sas::Channel::S});
  CHECK(m.records[2] == sas::EventRecord{7, sas::Channel::aS});
  CHECK(m.records[3] == sas::EventRecord{50, sas::Channel::S});
  CHECK(m.records[4] == sas::EventRecord{90, sas::Channel::aS});

  b.n_pulses = 50;
  CHECK_THROWS_AS(sas::merge_streams(a, b), sas::data_error);
}

TEST_CASE("stream validation catches disorder and range violations") {
  sas::EventStream s;
  s.n_pulses = 10;
  s.rep_rate_hz = 76e6;
  s.records = {{3, sas::Channel::S}, {3, sas::Channel::S}};
  CHECK_THROWS_AS(s.validate(), sas::data_error);
  s.records = {{3, sas::Channel::aS}, {3, sas::Channel::S}};
  CHECK_THROWS_AS(s.validate(), sas::data_error);
  s.records = {{11, sas::Channel::S}};
  CHECK_THROWS_AS(s.validate(), sas::data_error);
  s.records = {{3, sas::Channel::S}, {3, sas::Channel::aS}, {4, sas::Channel::S}};
  CHECK_NOTHROW(s.validate());
}
