#include "pdcqed/photon.hpp"

#include <cmath>
#include <sstream>

#include "pdcqed/errors.hpp"

namespace pdc {

void FockMode::validate() const {
  if (!(omega > 0.0)) throw ConfigError("mode " + std::to_string(label) + ": omega must be positive");
  if (n_max < 1) throw ConfigError("mode " + std::to_string(label) + ": n_max must be at least 1");
  const double norm = std::hypot(polarization[0], polarization[1]);
  if (std::abs(norm - 1.0) > 1e-12)
    throw ConfigError("mode " + std::to_string(label) + ": polarization must be a unit vector");
}

double dot(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return a[0] * b[0] + a[1] * b[1];
}

LadderOps ladder_ops(const FockMode& mode) {
  if (mode.n_max < 1) throw ConfigError("ladder_ops: n_max must be at least 1");
  std::vector<Triplet> t;
  for (int n = 1; n <= mode.n_max; ++n) t.push_back({n - 1, n, std::sqrt(static_cast<double>(n))});
  LadderOps ops;
  ops.annihilate = SparseMatrix::from_triplets(mode.dim(), mode.dim(), t);
  ops.create = ops.annihilate.adjoint();
  return ops;
}

Quadratures quadratures(const FockMode& mode) {
  mode.validate();
  const auto l = ladder_ops(mode);
  const double sq = std::sqrt(1.0 / (2.0 * mode.omega));
  const double sp = std::sqrt(mode.omega / 2.0);
  return {SparseHermitianOp((l.annihilate + l.create).scaled(sq)),
          SparseHermitianOp((l.create + l.annihilate.scaled(-1.0)).scaled(cplx(0.0, sp)))};
}

SparseMatrix number_operator(const FockMode& mode) {
  std::vector<cplx> d(mode.dim());
  for (std::size_t n = 0; n < d.size(); ++n) d[n] = static_cast<double>(n);
  return SparseMatrix::diagonal(d);
}

SparseMatrix photon_hamiltonian(const FockMode& mode) {
  std::vector<cplx> d(mode.dim());
  for (std::size_t n = 0; n < d.size(); ++n) d[n] = mode.omega * (n + 0.5);
  return SparseMatrix::diagonal(d);
}

SparseMatrix q_squared_projected(const FockMode& mode) {
  mode.validate();
  const double s = 1.0 / (2.0 * mode.omega);
  std::vector<Triplet> t;
  for (int n = 0; n <= mode.n_max; ++n) {
    t.push_back({n, n, s * (2.0 * n + 1.0)});
    if (n + 2 <= mode.n_max) {
      const double v = s * std::sqrt(static_cast<double>(n + 1) * (n + 2));
      t.push_back({n + 2, n, v});
      t.push_back({n, n + 2, v});
    }
  }
  return SparseMatrix::from_triplets(mode.dim(), mode.dim(), t);
}

double poisson_tail(double mean, int n_max) {
  if (mean <= 0.0) return 0.0;
  // Sum the tail directly from n_max + 1 upward, which avoids 1 - (1 - tail) cancellation.
  double logp = -mean + (n_max + 1) * std::log(mean) - std::lgamma(n_max + 2.0);
  double term = std::exp(logp);
  double tail = 0.0;
  for (int n = n_max + 1; n < n_max + 100000; ++n) {
    tail += term;
    term *= mean / (n + 1);
    if (n > mean && term < 1e-18 * tail) break;
  }
  return tail;
}

CVector coherent_state(cplx xi, int n_max, double tail_tol) {
  if (n_max < 0) throw ConfigError("coherent_state: n_max must be non-negative");
  const double mean = std::norm(xi);
  const double tail = poisson_tail(mean, n_max);
  if (tail > tail_tol) {
    std::ostringstream msg;
    msg << "coherent state |xi|^2 = " << mean << " truncated at n_max = " << n_max << " drops Poisson mass "
        << tail << " > " << tail_tol << "; raise n_max";
    throw ConfigError(msg.str());
  }
  CVector c(n_max + 1);
  c(0) = std::exp(-0.5 * mean);
  for (int n = 1; n <= n_max; ++n) c(n) = c(n - 1) * xi / std::sqrt(static_cast<double>(n));
  c /= c.norm();
  return c;
}

}  // namespace pdc
