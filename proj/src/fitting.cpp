#include "mirroramp/fitting.hpp"

#include <boost/math/tools/minima.hpp>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unsupported/Eigen/LevenbergMarquardt>

#include "mirroramp/calibration.hpp"
#include "mirroramp/errors.hpp"
#include "mirroramp/probe_response.hpp"

namespace mirroramp {

using cd = std::complex<double>;

std::vector<cd> model_weak_reflection(std::span<const double> f, double f10, double relax, double decoh) {
  require(relax >= 0.0 && decoh > 0.0, "rates must be positive");
  std::vector<cd> r(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) r[k] = 1.0 - relax / cd(decoh, -(f[k] - f10));
  return r;
}

namespace {

// Phase about the circle centre: theta(f) = theta0 + 2 atan((f - f0) / gamma).
// Parameters scaled as f0 = f0i + gi x0, gamma = gi x1, theta0 = x2.
struct PhaseFunctor : Eigen::DenseFunctor<double> {
  const std::vector<double>& f;
  const std::vector<double>& theta;
  double f0i, gi;
  PhaseFunctor(const std::vector<double>& f_, const std::vector<double>& th, double f0, double g)
      : DenseFunctor<double>(3, static_cast<int>(f_.size())), f(f_), theta(th), f0i(f0), gi(g) {}
  int operator()(const InputType& x, ValueType& out) const {
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double u = (f[k] - f0i - gi * x(0)) / (gi * x(1));
      out(k) = x(2) + 2.0 * std::atan(u) - theta[k];
    }
    return 0;
  }
  int df(const InputType& x, JacobianType& j) const {
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double u = (f[k] - f0i - gi * x(0)) / (gi * x(1));
      const double d = 2.0 / (1.0 + u * u);
      j(k, 0) = -d / x(1);
      j(k, 1) = -d * u / x(1);
      j(k, 2) = 1.0;
    }
    return 0;
  }
};

// Complex residuals stacked (re, im). f0 = f0i + gi x0, gamma = gi x1, Gamma = gi x2.
struct ComplexFunctor : Eigen::DenseFunctor<double> {
  const std::vector<double>& f;
  const std::vector<cd>& r;
  double f0i, gi;
  ComplexFunctor(const std::vector<double>& f_, const std::vector<cd>& r_, double f0, double g)
      : DenseFunctor<double>(3, 2 * static_cast<int>(f_.size())), f(f_), r(r_), f0i(f0), gi(g) {}
  int operator()(const InputType& x, ValueType& out) const {
    for (std::size_t k = 0; k < f.size(); ++k) {
      const cd d(x(1), -(f[k] - f0i) / gi + x(0));
      const cd res = 1.0 - x(2) / d - r[k];
      out(2 * k) = res.real();
      out(2 * k + 1) = res.imag();
    }
    return 0;
  }
  int df(const InputType& x, JacobianType& j) const {
    for (std::size_t k = 0; k < f.size(); ++k) {
      const cd d(x(1), -(f[k] - f0i) / gi + x(0));
      const cd d2 = d * d;
      const cd g0 = x(2) / d2 * cd(0.0, 1.0);  // d/dx0
      const cd g1 = x(2) / d2;                 // d/dx1
      const cd g2 = -1.0 / d;                  // d/dx2
      j(2 * k, 0) = g0.real();
      j(2 * k + 1, 0) = g0.imag();
      j(2 * k, 1) = g1.real();
      j(2 * k + 1, 1) = g1.imag();
      j(2 * k, 2) = g2.real();
      j(2 * k + 1, 2) = g2.imag();
    }
    return 0;
  }
};

template <class Functor>
void run_lm(Functor& fn, Eigen::VectorXd& x) {
  Eigen::LevenbergMarquardt<Functor> lm(fn);
  lm.setXtol(1e-14);
  lm.setFtol(1e-14);
  lm.setMaxfev(2000);
  lm.minimize(x);
}

}  // namespace

FitReport fit_circle(const ReflectionTrace& trace) {
  const auto& f = trace.frequency_hz;
  const auto& r = trace.r;
  require(f.size() == r.size(), "trace columns differ in length");
  require(f.size() >= 5, "trace needs at least 5 points");
  for (std::size_t k = 1; k < f.size(); ++k) require(f[k] > f[k - 1], "trace frequency must be strictly increasing");

  const std::size_t n = f.size();
  double spread = 0.0;
  for (const auto& z : r) spread = std::max(spread, std::abs(z - r.front()));
  if (spread < 1e-3) fail(ErrorCode::DegenerateCircle, "no atomic response in trace");

  // Algebraic (Kasa) circle: x^2 + y^2 + D x + E y + F = 0.
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (std::size_t k = 0; k < n; ++k) {
    a(k, 0) = r[k].real();
    a(k, 1) = r[k].imag();
    a(k, 2) = 1.0;
    b(k) = -std::norm(r[k]);
  }
  const Eigen::Vector3d s = a.colPivHouseholderQr().solve(b);
  const cd centre(-s(0) / 2.0, -s(1) / 2.0);
  const double radius = std::sqrt(std::max(0.0, std::norm(centre) - s(2)));
  if (!(radius >= 1e-3)) fail(ErrorCode::DegenerateCircle, "fitted circle radius below 1e-3");

  // Initial resonance: point farthest from the off-resonant value 1; width from half power.
  std::size_t ip = 0;
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(r[k] - 1.0) > std::abs(r[ip] - 1.0)) ip = k;
  const double peak2 = std::norm(r[ip] - 1.0);
  double flo = f[ip], fhi = f[ip];
  for (std::size_t k = 0; k < n; ++k)
    if (std::norm(r[k] - 1.0) >= 0.5 * peak2) {
      flo = std::min(flo, f[k]);
      fhi = std::max(fhi, f[k]);
    }
  const double step = (f.back() - f.front()) / double(n - 1);
  const double g_init = std::max(0.5 * (fhi - flo), step);
  const double f0_init = f[ip];

  // Phase profile about the centre, unwrapped.
  std::vector<double> theta(n);
  for (std::size_t k = 0; k < n; ++k) {
    theta[k] = std::arg(r[k] - centre);
    if (k > 0) {
      while (theta[k] - theta[k - 1] > std::numbers::pi) theta[k] -= kTwoPi;
      while (theta[k] - theta[k - 1] < -std::numbers::pi) theta[k] += kTwoPi;
    }
  }
  const double theta0 = theta[ip];  // at resonance the atan term vanishes
  PhaseFunctor pf(f, theta, f0_init, g_init);
  Eigen::VectorXd xp(3);
  xp << 0.0, 1.0, theta0;
  run_lm(pf, xp);
  const double f0_phase = f0_init + g_init * xp(0);
  const double g_phase = std::abs(g_init * xp(1));
  if (!(g_phase > 0.0) || !std::isfinite(f0_phase)) fail(ErrorCode::PoorFit, "phase fit diverged");

  // Joint refinement of (f10, gamma10, Gamma10) on the complex data.
  ComplexFunctor cf(f, r, f0_phase, g_phase);
  Eigen::VectorXd x(3);
  x << 0.0, 1.0, 2.0 * radius;
  run_lm(cf, x);

  FitReport rep;
  rep.omega10_hz = f0_phase + g_phase * x(0);
  rep.decoherence_hz = g_phase * x(1);
  rep.relaxation_hz = g_phase * x(2);
  rep.dephasing_hz = rep.decoherence_hz - rep.relaxation_hz / 2.0;
  rep.circle_radius = radius;

  Eigen::VectorXd res(2 * n);
  cf(x, res);
  double base = 0.0;
  for (const auto& z : r) base += std::norm(z - 1.0);
  rep.residual_norm = res.norm();
  rep.relative_residual = rep.residual_norm / std::sqrt(base);
  Eigen::MatrixXd jac(2 * n, 3);
  cf.df(x, jac);
  const double sigma2 = res.squaredNorm() / std::max<double>(1.0, double(2 * n) - 3.0);
  const Eigen::Matrix3d cov_x = sigma2 * (jac.transpose() * jac).inverse();
  // x -> (f10, Gamma10, gamma10) in Hz: columns scale by g_phase, with x2 <-> Gamma and x1 <-> gamma.
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();
  t(0, 0) = g_phase;
  t(1, 2) = g_phase;
  t(2, 1) = g_phase;
  rep.covariance = t * cov_x * t.transpose();
  if (!std::isfinite(rep.relative_residual) || !(rep.decoherence_hz > 0.0) || !(rep.relaxation_hz > 0.0))
    fail(ErrorCode::PoorFit, "fit produced non-physical parameters");
  if (rep.relative_residual > 0.05)
    fail(ErrorCode::PoorFit, "relative residual " + std::to_string(rep.relative_residual) + " exceeds 5%");
  return rep;
}

double saturation_model(double power_dbm, double f10, double relax, double decoh) {
  require(decoh >= relax / 2.0, "decoherence below Gamma10 / 2");
  TransmonParams p;
  p.charging_energy_hz = 1.0;
  p.josephson_energy_hz = 1.0;
  p.levels = 2;
  p.measured_transitions_hz = {f10};
  p.relaxation_hz = relax;
  p.dephasing_hz = decoh - relax / 2.0;
  const Model model = Model::from_params(p);
  const double w = hz_to_rad(f10);
  return single_tone_reflection(model, ProbeConfig{w, dbm_to_rabi(power_dbm, w, model.gamma10())}).magnitude;
}

SaturationFit fit_power_saturation(std::span<const double> powers, std::span<const double> mags, double f10,
                                   double ratio) {
  require(powers.size() == mags.size(), "power and magnitude lengths differ");
  require(powers.size() >= 8, "saturation fit needs at least 8 points");
  require(ratio >= 0.5, "decoherence ratio must be at least 1/2");
  for (std::size_t k = 1; k < powers.size(); ++k) require(powers[k] > powers[k - 1], "powers must increase");
  const std::size_t imin = static_cast<std::size_t>(std::min_element(mags.begin(), mags.end()) - mags.begin());
  if (imin == 0 || imin + 1 == mags.size()) fail(ErrorCode::NoMinimum, "|r| is monotone over the power range");

  // For ratio 1/2 the minimum sits at hbar w Gamma10 / 8; this seeds the bracket.
  const double g0 = rad_to_hz(8.0 * dbm_to_watts(powers[imin]) / (kHbar * hz_to_rad(f10)));
  auto cost = [&](double log_g) {
    const double g = std::exp(log_g);
    double sum = 0.0;
    for (std::size_t k = 0; k < powers.size(); ++k) {
      const double d = saturation_model(powers[k], f10, g, ratio * g) - mags[k];
      sum += d * d;
    }
    return sum;
  };
  const auto [log_g, res] = boost::math::tools::brent_find_minima(cost, std::log(g0 / 8.0), std::log(g0 * 8.0), 40);
  const double g = std::exp(log_g);
  auto model_at = [&](double p) { return saturation_model(p, f10, g, ratio * g); };
  const auto [pmin, rmin] = boost::math::tools::brent_find_minima(model_at, powers.front(), powers.back(), 40);
  (void)rmin;
  return SaturationFit{g, pmin, std::sqrt(res / double(powers.size()))};
}

ReflectionTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot open trace " + path.string());
  ReflectionTrace t;
  std::string line;
  bool polar = false;
  bool header_seen = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.find("freq_hz") != std::string::npos) {
        std::string h;
        for (char ch : line)
          if (!std::isspace(static_cast<unsigned char>(ch))) h += ch;
        if (h == "freq_hz,mag_db,phase_deg")
          polar = true;
        else if (h != "freq_hz,re,im")
          fail(ErrorCode::InvalidArgument, "unrecognised trace header: " + line);
        continue;
      }
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        fail(ErrorCode::InvalidArgument, path.string() + ":" + std::to_string(lineno) + ": malformed number");
      }
    }
    if (v.size() != 3) fail(ErrorCode::InvalidArgument, path.string() + ":" + std::to_string(lineno) + ": expected 3 columns");
    t.frequency_hz.push_back(v[0]);
    if (polar)
      t.r.push_back(std::polar(std::pow(10.0, v[1] / 20.0), v[2] * std::numbers::pi / 180.0));
    else
      t.r.push_back(cd(v[1], v[2]));
  }
  if (t.frequency_hz.size() < 5) fail(ErrorCode::InvalidArgument, "trace has fewer than 5 rows");
  for (std::size_t k = 1; k < t.frequency_hz.size(); ++k)
    if (!(t.frequency_hz[k] > t.frequency_hz[k - 1]))
      fail(ErrorCode::InvalidArgument, "trace frequency must be strictly increasing");
  return t;
}

}  // namespace mirroramp
