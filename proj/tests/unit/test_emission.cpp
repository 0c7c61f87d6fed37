#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "mirroramp/dressed.hpp"
#include "mirroramp/emission.hpp"
#include "mirroramp/sweep.hpp"

using namespace mirroramp;

namespace {
std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> f(n);
  for (int k = 0; k < n; ++k) f[k] = lo + (hi - lo) * k / (n - 1);
  return f;
}
}  // namespace

TEST_CASE("output field operator") {
  const auto two = testutil::two_level(4.766e9, 2.264e6, 0.0);
  const Operator c2 = output_field_operator(two.rates, 2);
  CHECK(c2(0, 1) == Complex(std::sqrt(two.gamma10())));
  CHECK(std::abs(c2(1, 0)) == 0.0);

  const Model ref = testutil::reference_model();
  const Operator c = output_field_operator(ref.rates, ref.dim());
  CHECK((c * Eigen::VectorXcd::Unit(ref.dim(), 0)).norm() == 0.0);
  std::mt19937 rng(5);
  const Operator rho = testutil::random_density(rng, ref.dim());
  double flux = 0.0;
  for (int n = 1; n < ref.dim(); ++n) flux += ref.rates.gamma(n) * rho(n, n).real();
  CHECK((c.adjoint() * c * rho).trace().real() == doctest::Approx(flux).epsilon(1e-12));
  CHECK_THROWS_AS(output_field_operator(ref.rates, 3), Error);
}

TEST_CASE("no pump, no emission") {
  const Model ref = testutil::reference_model();
  const PumpConfig off{hz_to_rad(4.53e9), 0.0, 3};
  const auto s = emission_spectrum(ref, off, grid(4.4e9, 4.9e9, 51));
  for (double v : s.density) CHECK(std::abs(v) < 1e-12);
  CHECK(std::abs(total_incoherent_flux(ref, off)) < 1e-12);
}

TEST_CASE("Mollow triplet") {
  const auto two = testutil::two_level(4.766e9, 2.264e6, 0.0);
  const double omega = hz_to_rad(30e6);
  const PumpConfig pump{two.omega10(), omega, 1};
  const auto s = emission_spectrum(two, pump, grid(4.766e9 - 60e6, 4.766e9 + 60e6, 2401));
  const auto peaks = spectrum_peaks(s, 0.05);
  REQUIRE(peaks.size() == 3);
  const auto d = dressed_spectrum(two, pump);
  const double split_hz = rad_to_hz(d.energies(1) - d.energies(0));
  CHECK(std::abs(peaks[0] - (4.766e9 - split_hz)) < 0.2e6);
  CHECK(std::abs(peaks[1] - 4.766e9) < 0.05e6);
  CHECK(std::abs(peaks[2] - (4.766e9 + split_hz)) < 0.2e6);
  CHECK(s.regularized_points == 1);
}

TEST_CASE("dephasing-assisted fluorescence sits at the bare transition") {
  const auto two = testutil::two_level(4.766e9, 2.264e6, 0.5e6);
  const PumpConfig pump{two.omega10() - hz_to_rad(20e6), hz_to_rad(1e6), 1};
  const auto s = emission_spectrum(two, pump, grid(4.716e9, 4.816e9, 1001));
  const auto it = std::max_element(s.density.begin(), s.density.end());
  CHECK(std::abs(s.frequency_hz[it - s.density.begin()] - 4.766e9) < 0.3e6);
}

TEST_CASE("incoherent flux matches the two-level closed form") {
  const double g_hz = 2.264e6;
  const auto two = testutil::two_level(4.766e9, g_hz, 0.3e6);
  const double g = two.gamma10(), gamma = g / 2.0 + two.rates.gamma_phi(1);
  for (double delta : {0.0, 3e7}) {
    for (double omega : {0.1 * g, g, 4.0 * g}) {
      const auto [ree, reg] = testutil::bloch_steady(delta, omega, g, gamma);
      const PumpConfig pump{two.omega10() + delta, omega, 1};
      CHECK(total_incoherent_flux(two, pump) == doctest::Approx(g * (ree - std::norm(reg))).epsilon(1e-8));
    }
  }
  const auto clean = testutil::two_level(4.766e9, g_hz, 0.0);
  const double omega = 0.02 * g;
  const double low = 2.0 * std::pow(omega, 4) / std::pow(g, 3);
  CHECK(total_incoherent_flux(clean, PumpConfig{clean.omega10(), omega, 1}) == doctest::Approx(low).epsilon(0.01));
}

TEST_CASE("spectrum is nonnegative and integrates to the flux") {
  const Model ref = testutil::reference_model();
  const double w = hz_to_rad(4.53e9);
  const PumpConfig pump{w, dbm_to_rabi(-100.0, w, ref.gamma10()), 3};
  // Dense near the pump, coarse in the wings.
  std::vector<double> f;
  for (double x = 3.0e9; x < 4.3e9; x += 0.2e6) f.push_back(x);
  for (double x = 4.3e9; x < 5.0e9; x += 0.02e6) f.push_back(x);
  for (double x = 5.0e9; x <= 6.5e9; x += 0.2e6) f.push_back(x);
  const auto s = emission_spectrum(ref, pump, f, 2);
  const double smax = *std::max_element(s.density.begin(), s.density.end());
  double integral = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    CHECK(s.density[k] >= -1e-6 * smax);
    if (k > 0) integral += 0.5 * (s.density[k] + s.density[k - 1]) * (f[k] - f[k - 1]);
  }
  CHECK(integral / s.incoherent_flux == doctest::Approx(1.0).epsilon(0.02));
  CHECK(s.incoherent_flux == doctest::Approx(total_incoherent_flux(ref, pump)).epsilon(1e-10));

  const std::vector<double> bad = {4.5e9, 4.4e9};
  CHECK_THROWS_AS(emission_spectrum(ref, pump, bad), Error);
}

TEST_CASE("resolvent spectrum agrees with a time-domain transform") {
  const Model ref = testutil::reference_model();
  const double w = hz_to_rad(4.53e9);
  const PumpConfig pump{w, dbm_to_rabi(-100.0, w, ref.gamma10()), 3};
  const Superoperator l0 = ref.pumped_liouvillian(pump);
  const DensityState rho = steady_state(l0);
  const Operator c = output_field_operator(ref.rates, ref.dim());
  const Operator dc = c - rho.expectation(c) * Operator::Identity(ref.dim(), ref.dim());

  // C(tau) = Tr[dc^dag exp(L0 tau)(dc rho)], sampled and transformed by the trapezoid rule.
  const double h = 0.05e-9;
  const int n = static_cast<int>(40.0 / ref.gamma10() / h);
  const SparseMatrix& l = l0.matrix;
  Generator rhs = [&l](const Vector& x, Vector& dx, double) { dx.noalias() = l * x; };
  Vector x = vectorize(dc * rho.matrix);
  std::vector<Complex> corr(n + 1);
  for (int k = 0; k <= n; ++k) {
    if (k > 0) x = integrate(rhs, x, (k - 1) * h, k * h, h);
    corr[k] = (dc.adjoint() * unvectorize(x, ref.dim())).trace();
  }
  const auto f = grid(4.70e9, 4.78e9, 33);
  const auto s = emission_spectrum(ref, pump, f);
  const double smax = *std::max_element(s.density.begin(), s.density.end());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double nu = hz_to_rad(f[i]) - w;
    Complex acc = 0.0;
    for (int k = 0; k <= n; ++k) {
      const Complex term = corr[k] * std::exp(Complex(0.0, -nu * k * h));
      acc += (k == 0 || k == n) ? 0.5 * term : term;
    }
    CHECK(std::abs(2.0 * (acc * h).real() - s.density[i]) < 0.02 * smax);
  }
}

TEST_CASE("peak finder") {
  SpectrumResult s;
  s.frequency_hz = grid(-10.0, 10.0, 201);
  for (double x : s.frequency_hz) s.density.push_back(std::exp(-(x - 2.03) * (x - 2.03)) + 0.5 * std::exp(-(x + 4) * (x + 4)));
  const auto p = spectrum_peaks(s, 0.05);
  REQUIRE(p.size() == 2);
  CHECK(p[0] == doctest::Approx(-4.0).epsilon(1e-2));
  CHECK(p[1] == doctest::Approx(2.03).epsilon(1e-2));
  CHECK(spectrum_peaks(s, 0.6).size() == 1);
}
