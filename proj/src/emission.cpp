#include "mirroramp/emission.hpp"

#include <cmath>

#include "mirroramp/calibration.hpp"
#include "mirroramp/errors.hpp"
#include "mirroramp/parallel.hpp"

namespace mirroramp {

Operator output_field_operator(const RateTable& rates, int dim) {
  require(rates.levels() == dim, "rate table does not match dimension");
  Operator c = Operator::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) c(n - 1, n) = std::sqrt(rates.gamma(n));
  return c;
}

SpectrumResult emission_spectrum(const Model& model, const PumpConfig& pump, std::span<const double> frequency_hz,
                                 int workers) {
  pump.validate();
  for (std::size_t i = 1; i < frequency_hz.size(); ++i)
    require(frequency_hz[i] > frequency_hz[i - 1], "frequency grid must be strictly increasing");
  const int m = model.dim();
  const Superoperator l0 = model.pumped_liouvillian(pump);
  const DensityState rho = steady_state(l0);
  const Operator c = output_field_operator(model.rates, m);
  const Complex mean_c = rho.expectation(c);
  const Operator dc = c - mean_c * Operator::Identity(m, m);
  const Operator dc_dag = dc.adjoint();
  const Vector source = vectorize(dc * rho.matrix);
  const SparseMatrix neg_l = -l0.matrix;
  const double min_shift = 1e-6 * model.gamma10();

  SpectrumResult out;
  out.frequency_hz.assign(frequency_hz.begin(), frequency_hz.end());
  out.density.assign(frequency_hz.size(), 0.0);
  out.pump = pump;
  out.incoherent_flux = (dc_dag * dc * rho.matrix).trace().real();
  std::vector<char> regularized(frequency_hz.size(), 0);

  parallel_for_with_state(
      frequency_hz.size(), workers, [&] { return ShiftedSolver(neg_l); },
      [&](ShiftedSolver& solver, std::size_t k) {
        double nu = hz_to_rad(frequency_hz[k]) - pump.frequency_rad;
        if (std::abs(nu) < min_shift) {
          // The steady-state mode makes the resolvent singular at the pump frequency.
          nu = nu < 0.0 ? -min_shift : min_shift;
          regularized[k] = 1;
        }
        const Operator y = unvectorize(solver.solve(Complex(0.0, nu), source), m);
        out.density[k] = 2.0 * (dc_dag * y).trace().real();
      });
  for (char r : regularized) out.regularized_points += r;
  return out;
}

double total_incoherent_flux(const Model& model, const PumpConfig& pump) {
  const DensityState rho = steady_state(model.pumped_liouvillian(pump));
  const Operator c = output_field_operator(model.rates, model.dim());
  const Operator dc = c - rho.expectation(c) * Operator::Identity(model.dim(), model.dim());
  return (dc.adjoint() * dc * rho.matrix).trace().real();
}

std::vector<double> spectrum_peaks(const SpectrumResult& s, double rel_threshold) {
  std::vector<double> peaks;
  const auto& y = s.density;
  const auto& f = s.frequency_hz;
  if (y.size() < 3) return peaks;
  const double ymax = *std::max_element(y.begin(), y.end());
  if (!(ymax > 0.0)) return peaks;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > rel_threshold * ymax)) continue;
    // Parabolic refinement on a uniform stencil.
    const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
    const double shift = denom != 0.0 ? 0.5 * (y[i - 1] - y[i + 1]) / denom : 0.0;
    peaks.push_back(f[i] + shift * 0.5 * (f[i + 1] - f[i - 1]));
  }
  return peaks;
}

}  // namespace mirroramp
