#include "pdcqed/propagator.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "pdcqed/errors.hpp"
#include "pdcqed/kernels.hpp"

namespace pdc {

namespace kp = kernels::parallel;

namespace {

// exp(-i T dt) e_1 for the leading k x k block of the Lanczos tridiagonal.
CVector small_propagator(const std::vector<double>& alpha, const std::vector<double>& beta, int k, double dt) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i + 1];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  const auto& v = es.eigenvectors();
  CVector phase(k);
  for (int i = 0; i < k; ++i) phase(i) = std::exp(cplx(0.0, -es.eigenvalues()(i) * dt)) * v(0, i);
  return v.cast<cplx>() * phase;
}

bool finite(const CVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
  return true;
}

}  // namespace

StepInfo krylov_step_inplace(const MatVec& h, CVector& psi, double dt, const KrylovOptions& opt) {
  if (opt.max_dim < 2) throw ConfigError("krylov dimension must be at least 2");
  const std::size_t n = static_cast<std::size_t>(psi.size());
  const double beta0 = kp::norm2(n, psi.data());
  StepInfo info;
  if (beta0 == 0.0) return info;
  if (!std::isfinite(beta0)) throw NumericalError("state contains NaN or Inf");

  const int m = static_cast<int>(std::min<std::size_t>(opt.max_dim, n));
  std::vector<CVector> v;
  v.reserve(m + 1);
  v.push_back(psi / beta0);
  std::vector<double> alpha, beta{0.0};
  CVector w(n);
  CVector coeffs;
  int k = 0;
  bool converged = false;
  for (int j = 0; j < m; ++j) {
    h(v[j].data(), w.data());
    alpha.push_back(kp::dot(n, v[j].data(), w.data()).real());
    kp::axpy(n, -alpha[j], v[j].data(), w.data());
    if (j > 0) kp::axpy(n, -beta[j], v[j - 1].data(), w.data());
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i <= j; ++i) kp::axpy(n, -kp::dot(n, v[i].data(), w.data()), v[i].data(), w.data());
    const double b = kp::norm2(n, w.data());
    beta.push_back(b);
    k = j + 1;
    coeffs = small_propagator(alpha, beta, k, dt);
    // Residual estimate of the truncated exponential.
    info.error_estimate = beta0 * b * std::abs(coeffs(k - 1));
    if (b <= 1e-14 * std::max(1.0, std::abs(alpha[j])) || info.error_estimate <= opt.tol) {
      converged = true;
      break;
    }
    if (j + 1 < m) v.push_back(w / b);
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "Krylov step did not converge at dimension " << m << " (error estimate " << info.error_estimate
        << " > " << opt.tol << "); reduce dt or raise krylov_dim";
    throw StepSizeError(msg.str());
  }
  info.krylov_dim = k;
  psi.setZero();
  for (int i = 0; i < k; ++i) kp::axpy(n, beta0 * coeffs(i), v[i].data(), psi.data());
  const double nrm = kp::norm2(n, psi.data());
  if (!std::isfinite(nrm)) throw NumericalError("Krylov step produced NaN or Inf");
  info.norm_defect = std::abs(nrm - beta0) / beta0;
  if (info.norm_defect > opt.norm_tol) {
    std::ostringstream msg;
    msg << "Krylov step norm defect " << info.norm_defect << " exceeds " << opt.norm_tol;
    throw NumericalError(msg.str());
  }
  kp::scale(n, beta0 / nrm, psi.data());
  return info;
}

CoupledState krylov_step(const SparseHermitianOp& h, const CoupledState& psi, double dt, const KrylovOptions& opt) {
  if (static_cast<std::size_t>(psi.amplitudes.size()) != h.dim())
    throw ConfigError("state dimension does not match the Hamiltonian");
  CoupledState out = psi;
  krylov_step_inplace([&](const cplx* x, cplx* y) { h.apply(x, y); }, out.amplitudes, dt, opt);
  out.time += dt;
  return out;
}

void PropagatorConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("propagation dt must be positive");
  if (krylov_dim < 2) throw ConfigError("krylov_dim must be at least 2");
  if (!(krylov_tol > 0.0)) throw ConfigError("krylov_tol must be positive");
  if (record_stride < 1) throw ConfigError("record_stride must be at least 1");
  if (checkpoint_every < 0) throw ConfigError("checkpoint_every must be non-negative");
  if (checkpoint_every > 0 && checkpoint_path.empty()) throw ConfigError("checkpointing needs a path");
}

PropagationReport propagate(const HamiltonianModel& h, CoupledState psi, const PropagatorConfig& cfg,
                            const Observer& observer, const CoupledBasis* basis) {
  cfg.validate();
  if (static_cast<std::size_t>(psi.amplitudes.size()) != h.dim())
    throw ConfigError("initial state dimension does not match the Hamiltonian");
  const std::string descriptor = basis ? basis->descriptor() : std::string("dim:") + std::to_string(h.dim());
  const double t0 = psi.time;
  const auto steps = static_cast<std::size_t>(std::max(0.0, std::ceil((cfg.t_end - t0) / cfg.dt - 1e-9)));
  KrylovOptions ko;
  ko.max_dim = cfg.krylov_dim;
  ko.tol = cfg.krylov_tol;

  PropagationReport rep;
  if (observer) observer(psi);
  CoupledState last_good = psi;
  for (std::size_t s = 0; s < steps; ++s) {
    // The last step is shortened to land on t_end.
    const double t_a = t0 + s * cfg.dt;
    const double h_s = s + 1 == steps ? cfg.t_end - t_a : cfg.dt;
    const double t_mid = t_a + 0.5 * h_s;
    StepInfo info;
    try {
      info = krylov_step_inplace([&](const cplx* x, cplx* y) { h.apply(t_mid, x, y); }, psi.amplitudes, h_s, ko);
    } catch (const NumericalError& e) {
      if (!cfg.checkpoint_path.empty()) write_checkpoint(cfg.checkpoint_path + ".lastgood", last_good, descriptor);
      std::ostringstream msg;
      msg << e.what() << " at t = " << psi.time << " (step " << s << ")";
      if (dynamic_cast<const StepSizeError*>(&e)) throw StepSizeError(msg.str());
      throw NumericalError(msg.str());
    }
    psi.time = s + 1 == steps ? cfg.t_end : t0 + (s + 1) * cfg.dt;
    rep.steps = s + 1;
    rep.max_krylov_dim = std::max(rep.max_krylov_dim, info.krylov_dim);
    rep.max_error_estimate = std::max(rep.max_error_estimate, info.error_estimate);
    rep.max_norm_defect = std::max(rep.max_norm_defect, info.norm_defect);
    rep.total_norm_defect += info.norm_defect;
    if (cfg.checkpoint_every > 0 && (s + 1) % cfg.checkpoint_every == 0) {
      if (!finite(psi.amplitudes)) throw NumericalError("state became non-finite");
      write_checkpoint(cfg.checkpoint_path, psi, descriptor);
      last_good = psi;
    }
    if (observer && ((s + 1) % cfg.record_stride == 0 || s + 1 == steps)) observer(psi);
  }
  rep.final_state = std::move(psi);
  return rep;
}

GroundStateResult ground_state(const SparseHermitianOp& h, const GroundStateOptions& opt, const CVector& start) {
  const std::size_t n = h.dim();
  if (n == 0) throw ConfigError("empty Hamiltonian");
  CVector x(n);
  if (start.size() == static_cast<Eigen::Index>(n)) {
    x = start;
  } else {
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> g;
    for (std::size_t i = 0; i < n; ++i) x(i) = cplx(g(rng), g(rng));
  }
  x /= x.norm();
  const int m = static_cast<int>(std::min<std::size_t>(std::max(opt.subspace, 2), n));
  GroundStateResult res;
  CVector hx(n);
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    h.apply(x.data(), hx.data());
    const double e = kp::dot(n, x.data(), hx.data()).real();
    CVector r = hx - e * x;
    res.energy = e;
    res.residual = r.norm();
    res.restarts = restart;
    if (res.residual < opt.tol) {
      res.state.amplitudes = x;
      return res;
    }
    // Lanczos from x with full reorthogonalization; restart from the lowest Ritz vector.
    std::vector<CVector> v{x};
    std::vector<double> alpha, beta{0.0};
    CVector w(n);
    int k = 0;
    for (int j = 0; j < m; ++j) {
      h.apply(v[j].data(), w.data());
      alpha.push_back(kp::dot(n, v[j].data(), w.data()).real());
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) kp::axpy(n, -kp::dot(n, v[i].data(), w.data()), v[i].data(), w.data());
      const double b = w.norm();
      k = j + 1;
      if (b < 1e-13 || j + 1 == m) break;
      beta.push_back(b);
      v.push_back(w / b);
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i + 1];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    CVector y = CVector::Zero(n);
    for (int i = 0; i < k; ++i) y += es.eigenvectors()(i, 0) * v[i];
    x = y / y.norm();
  }
  std::ostringstream msg;
  msg << "ground state did not converge: residual " << res.residual << " after " << opt.max_restarts << " restarts";
  throw NumericalError(msg.str());
}

}  // namespace pdc
