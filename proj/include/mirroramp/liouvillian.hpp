#pragma once

#include <Eigen/Sparse>
#include <functional>

#include "mirroramp/transmon.hpp"

namespace mirroramp {

using SparseMatrix = Eigen::SparseMatrix<Complex>;  // column-major
using Vector = Eigen::VectorXcd;

// Column stacking: element (i, j) of an M x M matrix sits at i + M j.
Vector vectorize(const Operator& op);
Operator unvectorize(const Vector& v, int dim);

struct Superoperator {
  int dim = 0;  // Hilbert-space dimension M; matrix is M^2 x M^2
  SparseMatrix matrix;

  Vector apply(const Vector& v) const { return matrix * v; }
  Operator apply(const Operator& op) const { return unvectorize(matrix * vectorize(op), dim); }
  double norm() const { return matrix.norm(); }
  int bandwidth() const;

  Superoperator operator+(const Superoperator& o) const;
  Superoperator operator*(Complex s) const;
};

// X -> A X B
Superoperator sandwich(const Operator& a, const Operator& b);
// X -> -i [H, X]
Superoperator commutator(const Operator& h);
// D[A, B] X = B X A - (A B X + X A B) / 2
Superoperator lindblad_cross_term(const Operator& a, const Operator& b);

enum class CrossMode { GeometricMean, ArithmeticMeanAsPrinted };

const char* to_string(CrossMode mode);
CrossMode cross_mode_from_string(const std::string& s);

// c_nm in the relaxation sum, n, m = 1..M-1 (stored at [n-1, m-1]).
Eigen::MatrixXd relaxation_coefficients(const RateTable& rates, CrossMode mode);
Superoperator build_dissipator(const RateTable& rates, CrossMode mode);
Superoperator build_liouvillian(const Operator& hamiltonian, const Superoperator& dissipator);

struct DensityState {
  Operator matrix;

  int dim() const { return static_cast<int>(matrix.rows()); }
  double trace_error() const { return std::abs(matrix.trace() - Complex(1.0)); }
  double hermiticity_error() const { return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const;
  Complex expectation(const Operator& op) const { return (matrix * op).trace(); }
  // Throws InvalidArgument when the physical invariants are violated beyond tol.
  void check(double tol = 1e-8) const;

  static DensityState ground(int dim);
};

// Unique trace-one null vector of L. Raises NonUniqueSteadyState or SolverFailure.
DensityState steady_state(const Superoperator& liouvillian);

// Sparse LU of (L + z I) with the sparsity pattern analysed once and reused across shifts.
class ShiftedSolver {
 public:
  explicit ShiftedSolver(const SparseMatrix& base);
  Vector solve(Complex shift, const Vector& rhs);

 private:
  SparseMatrix work_;
  std::vector<Complex*> diag_;
  std::vector<Complex> base_diag_;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
};

struct IntegratorOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double min_step_fraction = 1e-14;  // of |t1 - t0|
  long max_steps = 50'000'000;
};

using Generator = std::function<void(const Vector& x, Vector& dxdt, double t)>;

// Adaptive Dormand-Prince 5(4). Raises StepUnderflow if the step collapses.
Vector integrate(const Generator& rhs, Vector x0, double t0, double t1, double dt_hint,
                 const IntegratorOptions& options = {});

DensityState evolve(const Superoperator& liouvillian, const DensityState& rho0, double t_final,
                    double dt_hint, const IntegratorOptions& options = {});

}  // namespace mirroramp
