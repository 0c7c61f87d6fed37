#include "mirroramp/probe_response.hpp"

#include <cmath>

namespace mirroramp {

using Triplet = Eigen::Triplet<Complex>;

const char* to_string(ReflectionMethod method) {
  switch (method) {
    case ReflectionMethod::LinearResponse: return "LinearResponse";
    case ReflectionMethod::HarmonicBalance: return "HarmonicBalance";
    case ReflectionMethod::SingleTone: return "SingleTone";
  }
  return "Unknown";
}

Complex reflection_from_coherences(std::span<const Complex> coherences, const RateTable& rates, double probe_rabi_rad,
                                   ReflectionConvention convention) {
  require(probe_rabi_rad > 0.0, "probe Rabi rate must be positive");
  require(static_cast<int>(coherences.size()) == rates.levels() - 1, "one coherence per transition expected");
  Complex sum = 0.0;
  for (int n = 1; n < rates.levels(); ++n) sum += std::sqrt(rates.gamma(1) * rates.gamma(n)) * coherences[n - 1];
  const double factor = convention == ReflectionConvention::InputOutput ? 2.0 : 1.0;
  return 1.0 - factor * Complex(0.0, 1.0) * sum / probe_rabi_rad;
}

std::vector<Complex> lowering_coherences(const Operator& rho) {
  std::vector<Complex> c;
  for (int n = 1; n < rho.rows(); ++n) c.push_back(rho(n, n - 1));
  return c;
}

PumpedSystem::PumpedSystem(const Model& model, const PumpConfig& pump, ReflectionConvention convention)
    : model_(model),
      pump_(pump),
      convention_(convention),
      liouvillian_(model.pumped_liouvillian(pump)),
      steady_(steady_state(liouvillian_)) {}

void PumpedSystem::check_detuning(double omega_p) const {
  require(omega_p > 0.0, "probe frequency must be positive");
  if (std::abs(omega_p - pump_.frequency_rad) < kMinDetuningRad)
    fail(ErrorCode::DegenerateDetuning, "probe within 1 kHz of the pump");
}

ReflectionPoint PumpedSystem::linear_response(double omega_p, double nominal_rabi) const {
  ShiftedSolver solver(liouvillian_.matrix);
  return linear_response(omega_p, solver, nominal_rabi);
}

ReflectionPoint PumpedSystem::linear_response(double omega_p, ShiftedSolver& solver, double nominal_rabi) const {
  check_detuning(omega_p);
  const double delta = omega_p - pump_.frequency_rad;
  const Operator vplus = build_probe_coupling(nominal_rabi, model_.dim()).first;
  const Operator& rho = steady_.matrix;
  const Vector rhs = Complex(0.0, 1.0) * vectorize(vplus * rho - rho * vplus);
  const Operator rho1 = unvectorize(solver.solve(Complex(0.0, delta), rhs), model_.dim());
  const auto coh = lowering_coherences(rho1);
  ReflectionPoint p;
  p.omega_p = omega_p;
  p.r = reflection_from_coherences(coh, model_.rates, nominal_rabi, convention_);
  p.magnitude = std::abs(p.r);
  p.method = ReflectionMethod::LinearResponse;
  return p;
}

Complex PumpedSystem::harmonic_balance_fixed(const ProbeConfig& probe, int cutoff) const {
  require(cutoff >= 1, "harmonic cutoff must be at least 1");
  require(probe.rabi_rad > 0.0, "probe Rabi rate must be positive");
  check_detuning(probe.frequency_rad);
  const int m = model_.dim();
  const int n = m * m;
  const int blocks = 2 * cutoff + 1;
  const double delta = probe.frequency_rad - pump_.frequency_rad;
  const auto [vplus, vminus] = build_probe_coupling(probe.rabi_rad, m);
  const SparseMatrix cplus = commutator(vplus).matrix;
  const SparseMatrix cminus = commutator(vminus).matrix;
  const SparseMatrix& l0 = liouvillian_.matrix;
  const int trace_row = cutoff * n;
  const double scale = l0.norm() / std::sqrt(double(n));

  std::vector<Triplet> triplets;
  triplets.reserve(blocks * (l0.nonZeros() + n + cplus.nonZeros() + cminus.nonZeros()));
  auto add_block = [&](const SparseMatrix& b, int bi, int bj) {
    for (int k = 0; k < b.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(b, k); it; ++it) {
        const int row = bi * n + static_cast<int>(it.row());
        if (row != trace_row) triplets.emplace_back(row, bj * n + it.col(), it.value());
      }
  };
  for (int b = 0; b < blocks; ++b) {
    const int k = b - cutoff;
    add_block(l0, b, b);
    for (int i = 0; i < n; ++i)
      if (b * n + i != trace_row) triplets.emplace_back(b * n + i, b * n + i, Complex(0.0, k * delta));
    if (b > 0) add_block(cplus, b, b - 1);
    if (b + 1 < blocks) add_block(cminus, b, b + 1);
  }
  for (int i = 0; i < m; ++i) triplets.emplace_back(trace_row, trace_row + i + m * i, scale);

  SparseMatrix a(blocks * n, blocks * n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) fail(ErrorCode::SolverFailure, "harmonic-balance system is singular");
  Vector rhs = Vector::Zero(blocks * n);
  rhs(trace_row) = scale;
  const Vector x = lu.solve(rhs);
  if (!x.allFinite()) fail(ErrorCode::SolverFailure, "harmonic-balance solve produced non-finite values");
  const Operator rho1 = unvectorize(x.segment((cutoff + 1) * n, n), m);
  const auto coh = lowering_coherences(rho1);
  return reflection_from_coherences(coh, model_.rates, probe.rabi_rad, convention_);
}

ReflectionPoint PumpedSystem::harmonic_balance(const ProbeConfig& probe, const HarmonicOptions& options) const {
  require(options.cutoff >= 1 && options.max_cutoff >= options.cutoff + 2, "invalid harmonic cutoff range");
  int k = options.cutoff;
  Complex rk = harmonic_balance_fixed(probe, k);
  while (true) {
    const Complex rk2 = harmonic_balance_fixed(probe, k + 2);
    if (std::abs(std::abs(rk2) - std::abs(rk)) < options.tolerance) {
      ReflectionPoint p;
      p.omega_p = probe.frequency_rad;
      p.r = rk2;
      p.magnitude = std::abs(rk2);
      p.method = ReflectionMethod::HarmonicBalance;
      p.harmonics = k + 2;
      return p;
    }
    if (k + 2 >= options.max_cutoff)
      fail(ErrorCode::HarmonicTruncationNotConverged,
           "no convergence up to K = " + std::to_string(options.max_cutoff));
    const int next = std::min(2 * k, options.max_cutoff - 2);
    rk = next == k + 2 ? rk2 : harmonic_balance_fixed(probe, next);
    k = next;
  }
}

ReflectionPoint linear_response_reflection(const Model& model, const PumpConfig& pump, double omega_p) {
  return PumpedSystem(model, pump).linear_response(omega_p);
}

ReflectionPoint harmonic_balance_reflection(const Model& model, const PumpConfig& pump, const ProbeConfig& probe,
                                            const HarmonicOptions& options) {
  return PumpedSystem(model, pump).harmonic_balance(probe, options);
}

ReflectionPoint single_tone_reflection(const Model& model, const ProbeConfig& probe, ReflectionConvention convention) {
  probe.validate();
  require(probe.rabi_rad > 0.0, "probe Rabi rate must be positive");
  const PumpConfig frame{probe.frequency_rad, probe.rabi_rad, 1};
  const DensityState rho = steady_state(model.pumped_liouvillian(frame));
  const auto coh = lowering_coherences(rho.matrix);
  ReflectionPoint p;
  p.omega_p = probe.frequency_rad;
  p.r = reflection_from_coherences(coh, model.rates, probe.rabi_rad, convention);
  p.magnitude = std::abs(p.r);
  p.method = ReflectionMethod::SingleTone;
  return p;
}

Complex time_domain_reflection(const PumpedSystem& system, const ProbeConfig& probe, double settle_time, int periods,
                               int samples_per_period) {
  require(probe.rabi_rad > 0.0, "probe Rabi rate must be positive");
  require(periods >= 1 && samples_per_period >= 4, "need at least one period and four samples per period");
  const int m = system.model().dim();
  const double delta = probe.frequency_rad - system.pump().frequency_rad;
  if (std::abs(delta) < kMinDetuningRad) fail(ErrorCode::DegenerateDetuning, "probe within 1 kHz of the pump");
  const double period = kTwoPi / std::abs(delta);
  const auto [vplus, vminus] = build_probe_coupling(probe.rabi_rad, m);
  const SparseMatrix cplus = commutator(vplus).matrix;
  const SparseMatrix cminus = commutator(vminus).matrix;
  const SparseMatrix& l0 = system.liouvillian().matrix;
  Generator rhs = [&](const Vector& x, Vector& dxdt, double t) {
    const Complex ph = std::exp(Complex(0.0, -delta * t));
    dxdt.noalias() = l0 * x;
    dxdt += ph * (cplus * x);
    dxdt += std::conj(ph) * (cminus * x);
  };
  const double h = period / samples_per_period;
  const double dt_hint = std::min(h, 1e-3 / std::max(1.0, l0.norm() / std::sqrt(double(m * m))));
  const double t_settle = std::ceil(settle_time / period) * period;
  Vector x = integrate(rhs, vectorize(system.steady().matrix), 0.0, t_settle, dt_hint);

  std::vector<Complex> acc(m - 1, 0.0);
  const int total = periods * samples_per_period;
  for (int s = 0; s < total; ++s) {
    const double t = t_settle + s * h;
    const Operator rho = unvectorize(x, m);
    const Complex ph = std::exp(Complex(0.0, delta * t));
    for (int n = 1; n < m; ++n) acc[n - 1] += rho(n, n - 1) * ph;
    x = integrate(rhs, x, t, t + h, dt_hint);
  }
  for (auto& a : acc) a /= double(total);
  return reflection_from_coherences(acc, system.model().rates, probe.rabi_rad);
}

}  // namespace mirroramp
