#include "mirroramp/liouvillian.hpp"

#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>
#include <cmath>

#include "mirroramp/errors.hpp"

namespace boost::numeric::odeint {
// The stock max-norm for Eigen vectors returns the scalar type; the controller needs a real one.
template <>
struct vector_space_norm_inf<mirroramp::Vector> {
  using result_type = double;
  double operator()(const mirroramp::Vector& x) const { return x.cwiseAbs().maxCoeff(); }
};
}  // namespace boost::numeric::odeint

namespace mirroramp {

using Triplet = Eigen::Triplet<Complex>;

Vector vectorize(const Operator& op) { return Eigen::Map<const Vector>(op.data(), op.size()); }

Operator unvectorize(const Vector& v, int dim) {
  require(v.size() == static_cast<Eigen::Index>(dim) * dim, "vector length does not match dimension");
  return Eigen::Map<const Operator>(v.data(), dim, dim);
}

int Superoperator::bandwidth() const {
  int bw = 0;
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(matrix, k); it; ++it)
      bw = std::max(bw, static_cast<int>(std::abs(it.row() - it.col())));
  return bw;
}

Superoperator Superoperator::operator+(const Superoperator& o) const {
  require(dim == o.dim, "superoperator dimension mismatch");
  Superoperator s{dim, matrix + o.matrix};
  s.matrix.prune(Complex(0.0));
  return s;
}

Superoperator Superoperator::operator*(Complex s) const { return Superoperator{dim, matrix * s}; }

Superoperator sandwich(const Operator& a, const Operator& b) {
  require(a.rows() == a.cols() && b.rows() == b.cols() && a.rows() == b.rows(), "operator dimension mismatch");
  const int m = static_cast<int>(a.rows());
  std::vector<Triplet> triplets;
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i) {
      if (a(i, k) == Complex(0.0)) continue;
      for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) {
          if (b(l, j) == Complex(0.0)) continue;
          triplets.emplace_back(i + m * j, k + m * l, a(i, k) * b(l, j));
        }
    }
  Superoperator s{m, SparseMatrix(m * m, m * m)};
  s.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return s;
}

Superoperator commutator(const Operator& h) {
  const Operator id = Operator::Identity(h.rows(), h.cols());
  const Complex mi(0.0, -1.0);
  return sandwich(h, id) * mi + sandwich(id, h) * (-mi);
}

Superoperator lindblad_cross_term(const Operator& a, const Operator& b) {
  const Operator ab = a * b;
  const Operator id = Operator::Identity(a.rows(), a.cols());
  return sandwich(b, a) + sandwich(ab, id) * Complex(-0.5) + sandwich(id, ab) * Complex(-0.5);
}

const char* to_string(CrossMode mode) {
  return mode == CrossMode::GeometricMean ? "GeometricMean" : "ArithmeticMeanAsPrinted";
}

CrossMode cross_mode_from_string(const std::string& s) {
  if (s == "GeometricMean" || s == "geometric") return CrossMode::GeometricMean;
  if (s == "ArithmeticMeanAsPrinted" || s == "arithmetic") return CrossMode::ArithmeticMeanAsPrinted;
  fail(ErrorCode::InvalidArgument, "unknown cross_mode '" + s + "'");
}

Eigen::MatrixXd relaxation_coefficients(const RateTable& rates, CrossMode mode) {
  const int k = rates.levels() - 1;
  Eigen::MatrixXd c(k, k);
  for (int n = 1; n <= k; ++n)
    for (int m = 1; m <= k; ++m)
      c(n - 1, m - 1) = mode == CrossMode::GeometricMean ? std::sqrt(rates.gamma(n) * rates.gamma(m))
                                                          : 0.5 * (rates.gamma(n) + rates.gamma(m));
  return c;
}

Superoperator build_dissipator(const RateTable& rates, CrossMode mode) {
  const int dim = rates.levels();
  const Eigen::MatrixXd c = relaxation_coefficients(rates, mode);
  Superoperator total{dim, SparseMatrix(dim * dim, dim * dim)};
  for (int n = 1; n < dim; ++n)
    for (int m = 1; m < dim; ++m) {
      if (c(n - 1, m - 1) == 0.0) continue;
      total = total + lindblad_cross_term(basis_op(dim, n, n - 1), basis_op(dim, m - 1, m)) * c(n - 1, m - 1);
    }
  for (int n = 1; n < dim; ++n) {
    if (rates.gamma_phi(n) == 0.0) continue;
    const Operator p = basis_op(dim, n, n);
    total = total + lindblad_cross_term(p, p) * (2.0 * rates.gamma_phi(n));
  }
  return total;
}

Superoperator build_liouvillian(const Operator& hamiltonian, const Superoperator& dissipator) {
  require(hamiltonian.rows() == dissipator.dim && hamiltonian.cols() == dissipator.dim,
          "Hamiltonian and dissipator dimensions differ");
  return commutator(hamiltonian) + dissipator;
}

double DensityState::min_eigenvalue() const {
  const Operator herm = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityState::check(double tol) const {
  require(trace_error() <= tol, "density matrix trace deviates from 1");
  require(hermiticity_error() <= tol, "density matrix is not Hermitian");
  require(min_eigenvalue() >= -tol, "density matrix is not positive");
}

DensityState DensityState::ground(int dim) { return DensityState{basis_op(dim, 0, 0)}; }

DensityState steady_state(const Superoperator& liouvillian) {
  const int m = liouvillian.dim;
  const int n = m * m;
  const SparseMatrix& l = liouvillian.matrix;
  require(l.rows() == n && l.cols() == n, "superoperator size does not match its dimension");
  const double lnorm = l.norm();
  // Trace row scaled to the typical row magnitude keeps the system balanced.
  const double scale = lnorm > 0.0 ? lnorm / std::sqrt(double(n)) : 1.0;

  std::vector<Triplet> triplets;
  triplets.reserve(l.nonZeros() + m);
  for (int k = 0; k < l.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(l, k); it; ++it)
      if (it.row() != 0) triplets.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < m; ++i) triplets.emplace_back(0, i + m * i, scale);
  SparseMatrix a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) fail(ErrorCode::NonUniqueSteadyState, "trace-constrained system is singular");

  Vector rhs = Vector::Zero(n);
  rhs(0) = scale;
  Vector x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) fail(ErrorCode::SolverFailure, "steady-state solve broke down");

  // Rank estimate: a second nullspace direction shows up as an enormous inverse norm.
  Vector probe(n);
  for (int k = 0; k < n; ++k) probe(k) = Complex(std::cos(1.3 * k + 0.2), std::sin(0.7 * k + 0.5));
  const Vector y = lu.solve(probe);
  const double cond = y.norm() / probe.norm() * a.norm();
  if (!std::isfinite(cond) || cond > 1e12)
    fail(ErrorCode::NonUniqueSteadyState, "steady state is not unique (condition estimate " + std::to_string(cond) + ")");

  Operator rho = unvectorize(x, m);
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  const double residual = (l * vectorize(rho)).norm();
  if (residual > 1e-9 * std::max(lnorm, 1e-300) * std::max(1.0, rho.norm()))
    fail(ErrorCode::SolverFailure, "steady-state residual too large");
  return DensityState{rho};
}

ShiftedSolver::ShiftedSolver(const SparseMatrix& base) {
  const Eigen::Index n = base.rows();
  std::vector<Triplet> triplets;
  triplets.reserve(base.nonZeros() + n);
  for (int k = 0; k < base.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(base, k); it; ++it) triplets.emplace_back(it.row(), it.col(), it.value());
  for (Eigen::Index i = 0; i < n; ++i) triplets.emplace_back(i, i, Complex(0.0));
  work_.resize(n, n);
  work_.setFromTriplets(triplets.begin(), triplets.end());
  work_.makeCompressed();
  diag_.resize(n);
  base_diag_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    diag_[i] = &work_.coeffRef(i, i);
    base_diag_[i] = *diag_[i];
  }
  lu_.analyzePattern(work_);
}

Vector ShiftedSolver::solve(Complex shift, const Vector& rhs) {
  for (std::size_t i = 0; i < diag_.size(); ++i) *diag_[i] = base_diag_[i] + shift;
  lu_.factorize(work_);
  if (lu_.info() != Eigen::Success) fail(ErrorCode::SolverFailure, "shifted system is singular");
  Vector x = lu_.solve(rhs);
  if (!x.allFinite()) fail(ErrorCode::SolverFailure, "shifted solve produced non-finite values");
  return x;
}

Vector integrate(const Generator& rhs, Vector x0, double t0, double t1, double dt_hint,
                 const IntegratorOptions& options) {
  namespace ode = boost::numeric::odeint;
  require(t1 >= t0, "integration interval must be forward in time");
  require(dt_hint > 0.0, "step hint must be positive");
  if (t1 == t0) return x0;
  auto stepper = ode::make_controlled(options.atol, options.rtol,
                                      ode::runge_kutta_dopri5<Vector, double, Vector, double, ode::vector_space_algebra>());
  auto system = [&rhs](const Vector& x, Vector& dxdt, double t) { rhs(x, dxdt, t); };
  const double min_dt = options.min_step_fraction * (t1 - t0);
  double t = t0;
  double dt = std::min(dt_hint, t1 - t0);
  long steps = 0;
  while (t1 - t > 1e-15 * std::abs(t1)) {
    if (t + dt > t1) dt = t1 - t;
    if (stepper.try_step(system, x0, t, dt) == ode::fail && dt < min_dt)
      fail(ErrorCode::StepUnderflow, "step size underflow at t = " + std::to_string(t));
    if (++steps > options.max_steps) fail(ErrorCode::StepUnderflow, "step budget exhausted");
    if (!x0.allFinite()) fail(ErrorCode::StepUnderflow, "state diverged at t = " + std::to_string(t));
  }
  return x0;
}

DensityState evolve(const Superoperator& liouvillian, const DensityState& rho0, double t_final, double dt_hint,
                    const IntegratorOptions& options) {
  require(t_final >= 0.0, "t_final must be non-negative");
  require(rho0.dim() == liouvillian.dim, "state and generator dimensions differ");
  if (t_final == 0.0) return rho0;
  const SparseMatrix& l = liouvillian.matrix;
  Generator rhs = [&l](const Vector& x, Vector& dxdt, double) { dxdt.noalias() = l * x; };
  const Vector x = integrate(rhs, vectorize(rho0.matrix), 0.0, t_final, dt_hint, options);
  return DensityState{unvectorize(x, rho0.dim())};
}

}  // namespace mirroramp
