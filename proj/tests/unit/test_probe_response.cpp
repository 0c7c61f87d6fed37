#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mirroramp/sweep.hpp"

using namespace mirroramp;

namespace {
const Model kRef = testutil::reference_model();
const double kPumpThree = hz_to_rad(4.530e9);
PumpConfig three_photon(double dbm) { return PumpConfig{kPumpThree, dbm_to_rabi(dbm, kPumpThree, kRef.gamma10()), 3}; }
}  // namespace

TEST_CASE("reflection from coherences") {
  const auto& rates = kRef.rates;
  std::vector<Complex> zero(5, 0.0);
  CHECK(reflection_from_coherences(zero, rates, 1.0) == Complex(1.0));
  CHECK_THROWS_AS(reflection_from_coherences(zero, rates, 0.0), Error);
  CHECK_THROWS_AS(reflection_from_coherences(std::vector<Complex>(2), rates, 1.0), Error);

  const auto two = testutil::two_level(4.766e9, 2.264e6, 0.0317e6);
  const double g = two.gamma10();
  const double gamma = g / 2.0 + two.rates.gamma_phi(1);
  const double omega = 1e3;
  const std::vector<Complex> c = {Complex(0.0, -omega / (2.0 * gamma))};
  const Complex r = reflection_from_coherences(c, two.rates, omega);
  CHECK(std::abs(r - (1.0 - g / gamma)) < 1e-12);
  CHECK(r.real() == doctest::Approx(1.0 - 2.264 / 1.1637).epsilon(1e-4));
  CHECK(std::abs(r) == doctest::Approx(0.945).epsilon(0.002));
  const Complex printed = reflection_from_coherences(c, two.rates, omega, ReflectionConvention::PrintedForm);
  CHECK(std::abs(printed - (1.0 - g / (2.0 * gamma))) < 1e-12);
}

TEST_CASE("linear response without pump") {
  const auto two = testutil::two_level(4.766e9, 2.264e6, 0.0);
  const PumpedSystem off(two, PumpConfig{hz_to_rad(4.0e9), 0.0, 1});
  CHECK(off.linear_response(two.omega10()).r.real() == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(std::abs(off.linear_response(two.omega10()).r.imag()) < 1e-9);

  const PumpedSystem ref_off(kRef, PumpConfig{kPumpThree, 0.0, 3});
  for (double f : {2.5e9, 6.5e9, 8.0e9}) CHECK(std::abs(ref_off.linear_response(hz_to_rad(f)).magnitude - 1.0) < 1e-3);

  // Passive mirror: no gain anywhere without a pump.
  auto p = TransmonParams::reference_device();
  p.dephasing_hz = 0.0;
  const auto m = Model::from_params(p);
  const PumpedSystem passive(m, PumpConfig{kPumpThree, 0.0, 3});
  for (double f = 3.5e9; f <= 5.2e9; f += 7e6) CHECK(passive.linear_response(hz_to_rad(f)).magnitude <= 1.0 + 1e-12);
}

TEST_CASE("linear response is independent of the nominal probe amplitude") {
  const PumpedSystem sys(kRef, three_photon(-100.0));
  for (double f : {4.70e9, 4.7389e9, 4.80e9}) {
    const Complex a = sys.linear_response(hz_to_rad(f), 1.0).r;
    const Complex b = sys.linear_response(hz_to_rad(f), 3.7e5).r;
    CHECK(std::abs(a - b) < 1e-10);
  }
}

TEST_CASE("probe on top of the pump is rejected") {
  const PumpedSystem sys(kRef, three_photon(-100.0));
  CHECK_THROWS_AS(sys.linear_response(kPumpThree + hz_to_rad(500.0)), Error);
  try {
    sys.linear_response(kPumpThree);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateDetuning);
  }
  CHECK_NOTHROW(sys.linear_response(kPumpThree + hz_to_rad(2e3)));
}

TEST_CASE("harmonic balance reduces to linear response for weak probes") {
  const PumpedSystem sys(kRef, three_photon(-102.0));
  const double gamma = hz_to_rad(kRef.params.decoherence_hz());
  for (double f : {4.60e9, 4.7389e9, 4.90e9}) {
    const ProbeConfig probe{hz_to_rad(f), gamma / 100.0};
    const auto hb = sys.harmonic_balance(probe);
    const auto lr = sys.linear_response(hz_to_rad(f));
    CHECK(std::abs(hb.r - lr.r) < 1e-3);
    CHECK(std::abs(sys.harmonic_balance_fixed(probe, 1) - lr.r) < 1e-3);
  }
}

TEST_CASE("harmonic balance convergence control") {
  const PumpedSystem sys(kRef, three_photon(-102.0));
  const double w = hz_to_rad(4.7389e9);
  const ProbeConfig probe{w, dbm_to_rabi(-121.0, w, kRef.gamma10())};
  const auto p = sys.harmonic_balance(probe, HarmonicOptions{1, 25, 1e-4});
  CHECK(std::abs(std::abs(sys.harmonic_balance_fixed(probe, p.harmonics)) -
                 std::abs(sys.harmonic_balance_fixed(probe, p.harmonics + 2))) < 1e-4);
  // A strong probe close to the pump needs many harmonics.
  const ProbeConfig hard{kPumpThree + hz_to_rad(3e6), hz_to_rad(300e6)};
  CHECK_THROWS_AS(sys.harmonic_balance(hard, HarmonicOptions{1, 3, 1e-8}), Error);
  CHECK_THROWS_AS(sys.harmonic_balance_fixed(ProbeConfig{w, 0.0}, 1), Error);
}

TEST_CASE("harmonic balance agrees with the time-domain oracle") {
  const auto two = testutil::two_level(4.766e9, 2.264e6, 0.0317e6);
  const PumpedSystem sys(two, PumpConfig{two.omega10() - hz_to_rad(20e6), hz_to_rad(15e6), 1});
  const ProbeConfig probe{two.omega10() + hz_to_rad(3e6), hz_to_rad(2e6)};
  const Complex hb = sys.harmonic_balance(probe, HarmonicOptions{1, 25, 1e-6}).r;
  const Complex td = time_domain_reflection(sys, probe, 50.0 / two.gamma10());
  CHECK(std::abs(hb - td) < 1e-3);
}

TEST_CASE("single-tone anchors") {
  auto p = TransmonParams::reference_device();
  p.dephasing_hz = 0.0;
  const auto clean = Model::from_params(p);
  const double w10 = clean.omega10();
  const double anchor = rabi_to_dbm(clean.gamma10() / std::sqrt(2.0), w10, clean.gamma10());
  CHECK(anchor == doctest::Approx(watts_to_dbm(kHbar * w10 * clean.gamma10() / 8.0)));
  CHECK(single_tone_reflection(clean, ProbeConfig{w10, dbm_to_rabi(anchor, w10, clean.gamma10())}).magnitude < 0.02);
  CHECK(std::abs(single_tone_reflection(clean, ProbeConfig{w10, dbm_to_rabi(-100.0, w10, clean.gamma10())}).magnitude -
                 1.0) < 0.05);
  const double weak = single_tone_reflection(kRef, ProbeConfig{w10, dbm_to_rabi(-185.0, w10, kRef.gamma10())}).magnitude;
  CHECK(weak == doctest::Approx(0.945).epsilon(0.005));

  // Two-level saturation formula r = 1 - (Gamma/gamma) / (1 + s), s = Omega^2 / (Gamma gamma).
  const auto two = testutil::two_level(4.766e9, 2.264e6, 0.2e6);
  const double g = two.gamma10(), gamma = g / 2.0 + two.rates.gamma_phi(1);
  for (double omega : {0.1 * g, g, 5.0 * g}) {
    const Complex r = single_tone_reflection(two, ProbeConfig{two.omega10(), omega}).r;
    CHECK(std::abs(r - (1.0 - (g / gamma) / (1.0 + omega * omega / (g * gamma)))) < 1e-9);
  }
}

TEST_CASE("peak analysis") {
  std::vector<double> f, y;
  const double w = 4e6;
  for (int k = -200; k <= 200; ++k) {
    f.push_back(4.739e9 + k * 0.05e6);
    const double d = f.back() - 4.739e9;
    y.push_back(1.0 + 0.2 / (1.0 + std::pow(2.0 * d / w, 2)));
  }
  const auto pk = analyze_peak(f, y);
  CHECK(pk.peak == doctest::Approx(1.2));
  CHECK(pk.frequency_hz == doctest::Approx(4.739e9));
  CHECK(pk.fwhm_hz == doctest::Approx(w).epsilon(1e-3));
  std::vector<double> flat(f.size(), 1.0);
  CHECK_THROWS_AS(analyze_peak(f, flat), Error);
}

TEST_CASE("reflection sweep") {
  SweepRequest req;
  req.model = kRef;
  req.pump_frequency_hz = 4.530e9;
  req.photon_order = 3;
  req.probe_frequencies_hz = {4.7389e9};
  req.powers_dbm = {-102.0};
  const auto one = reflection_sweep(req);
  CHECK(one.values.size() == 1);
  CHECK(one.at(0) == linear_response_reflection(kRef, three_photon(-102.0), hz_to_rad(4.7389e9)).r);

  req.probe_frequencies_hz = {4.52e9, 4.53e9, 4.54e9, 4.74e9};
  req.powers_dbm = {-110.0, -105.0, -100.0};
  const auto grid = reflection_sweep(req);
  CHECK(grid.flagged_count() == 3);
  CHECK(grid.flags[grid.index(1, 2)] == ErrorCode::DegenerateDetuning);
  CHECK(std::isnan(grid.magnitude(1, 0)));
  CHECK(std::isfinite(grid.magnitude(3, 1)));
  req.workers = 3;
  const auto par = reflection_sweep(req);
  for (std::size_t k = 0; k < grid.values.size(); ++k)
    if (grid.flags[k] == ErrorCode::None) CHECK(grid.values[k] == par.values[k]);

  req.method = ReflectionMethod::HarmonicBalance;
  req.kind = SweepKind::ProbePower;
  req.pump_power_dbm = -102.0;
  req.probe_frequencies_hz = {4.7389e9};
  req.powers_dbm = {-160.0};
  const auto hb = reflection_sweep(req);
  CHECK(std::abs(hb.at(0) - one.at(0)) < 1e-3);

  req.powers_dbm.clear();
  CHECK_THROWS_AS(reflection_sweep(req), Error);
  req.powers_dbm = {-100.0, -110.0};
  CHECK_THROWS_AS(reflection_sweep(req), Error);
}
