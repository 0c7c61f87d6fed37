#pragma once

#include <span>

#include "mirroramp/calibration.hpp"
#include "mirroramp/errors.hpp"
#include "mirroramp/model.hpp"

namespace mirroramp {

enum class ReflectionMethod { LinearResponse, HarmonicBalance, SingleTone };

enum class ReflectionConvention {
  InputOutput,  // r = 1 - 2i sum(...) / Omega_p
  PrintedForm,  // same without the factor 2, kept for comparison
};

const char* to_string(ReflectionMethod method);

struct ReflectionPoint {
  double omega_p = 0.0;  // rad/s
  Complex r{1.0, 0.0};
  double magnitude = 1.0;
  ReflectionMethod method = ReflectionMethod::LinearResponse;
  int harmonics = 0;  // cutoff actually used (harmonic balance only)
};

// coherences[n-1] is the first-harmonic <sigma_{n-1,n}>, n = 1..M-1.
Complex reflection_from_coherences(std::span<const Complex> coherences, const RateTable& rates,
                                   double probe_rabi_rad,
                                   ReflectionConvention convention = ReflectionConvention::InputOutput);

// <sigma_{n-1,n}> = rho(n, n-1) for n = 1..M-1.
std::vector<Complex> lowering_coherences(const Operator& rho);

inline constexpr double kMinDetuningRad = kTwoPi * 1e3;

struct HarmonicOptions {
  int cutoff = 1;       // starting K
  int max_cutoff = 25;  // escalation ceiling
  double tolerance = 1e-4;
};

// Pump-only operating point: Liouvillian and steady state are built once and shared by every
// probe evaluation. Immutable after construction.
class PumpedSystem {
 public:
  PumpedSystem(const Model& model, const PumpConfig& pump,
               ReflectionConvention convention = ReflectionConvention::InputOutput);

  const Model& model() const { return model_; }
  const PumpConfig& pump() const { return pump_; }
  const Superoperator& liouvillian() const { return liouvillian_; }
  const DensityState& steady() const { return steady_; }

  // First-order response; nominal_rabi only scales intermediate quantities.
  ReflectionPoint linear_response(double omega_p, double nominal_rabi = 1.0) const;
  // Same with a caller-owned solver (reuses the symbolic factorization across frequencies).
  ReflectionPoint linear_response(double omega_p, ShiftedSolver& solver, double nominal_rabi = 1.0) const;

  // Fixed-cutoff harmonic balance; returns r from the k = 1 block.
  Complex harmonic_balance_fixed(const ProbeConfig& probe, int cutoff) const;
  // Escalating cutoff until |r| is stable to options.tolerance.
  ReflectionPoint harmonic_balance(const ProbeConfig& probe, const HarmonicOptions& options = {}) const;

 private:
  void check_detuning(double omega_p) const;

  Model model_;
  PumpConfig pump_;
  ReflectionConvention convention_;
  Superoperator liouvillian_;
  DensityState steady_;
};

ReflectionPoint linear_response_reflection(const Model& model, const PumpConfig& pump, double omega_p);
ReflectionPoint harmonic_balance_reflection(const Model& model, const PumpConfig& pump,
                                            const ProbeConfig& probe, const HarmonicOptions& options = {});
// Probe as the only drive, solved in its own rotating frame.
ReflectionPoint single_tone_reflection(const Model& model, const ProbeConfig& probe,
                                       ReflectionConvention convention = ReflectionConvention::InputOutput);

// Time-domain reference: integrates the two-tone master equation from the pump steady state
// for settle_time, then projects the exp(-i delta t) component over `periods` beat periods.
Complex time_domain_reflection(const PumpedSystem& system, const ProbeConfig& probe, double settle_time,
                               int periods = 4, int samples_per_period = 64);

}  // namespace mirroramp
