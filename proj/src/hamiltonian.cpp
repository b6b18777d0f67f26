#include "pdcqed/hamiltonian.hpp"

#include <cmath>
#include <set>

#include "pdcqed/errors.hpp"
#include "pdcqed/kernels.hpp"

namespace pdc {

namespace {

// sin(pi/2) style round-off would leave 6e-17 couplings; treat those as zero.
double snap(double v) { return std::abs(v) < 1e-15 ? 0.0 : v; }

SparseMatrix dense_hermitian_to_sparse(const CMatrix& m) {
  const CMatrix h = 0.5 * (m + m.adjoint());
  const double scale = h.cwiseAbs().maxCoeff();
  return SparseMatrix::from_dense(h, 1e-13 * std::max(scale, 1e-300));
}

std::vector<int> mode_factors_in(const CoupledBasis& b) {
  std::vector<int> f;
  for (std::size_t i = 0; i < b.modes().size(); ++i) f.push_back(static_cast<int>(i + 1));
  return f;
}

CoupledBasis rebuild_with_modes(const CoupledBasis& basis, std::vector<FockMode> modes) {
  std::optional<BathBasis> bath;
  if (basis.has_bath()) bath = basis.bath();
  return CoupledBasis(basis.matter_dim(), std::move(modes), std::move(bath));
}

}  // namespace

std::array<double, 2> polarization_for(int label, const MixingAngles& a, Geometry g) {
  if (g == Geometry::kNonDegenerate) {
    switch (label) {
      case 1: return {1.0, 0.0};
      case 2: return {snap(-std::sin(a.theta2)), snap(std::cos(a.theta2))};
      case 3: return {snap(std::sin(a.theta3)), snap(std::cos(a.theta3))};
      default: break;
    }
  } else {
    switch (label) {
      case 1: return {snap(std::cos(a.theta1)), snap(std::sin(a.theta1))};
      case 2: return {0.0, 1.0};
      default: break;
    }
  }
  throw ConfigError("no polarization rule for mode " + std::to_string(label) + " in this geometry");
}

void apply_geometry(std::vector<FockMode>& modes, const MixingAngles& angles, Geometry g) {
  for (auto& m : modes) m.polarization = polarization_for(m.label, angles, g);
}

SparseMatrix assemble_kron_terms(const CoupledBasis& basis, const std::vector<KronTerm>& terms) {
  for (const auto& t : terms)
    for (const auto& f : t.factors) {
      if (f.factor >= basis.factor_count()) throw ConfigError("Kronecker term names a missing factor");
      if (f.op.rows() != basis.factor_dim(f.factor) || f.op.cols() != basis.factor_dim(f.factor))
        throw ConfigError("Kronecker factor has the wrong size");
    }
  const std::size_t n = basis.dimension();
  return SparseMatrix::assemble_rows(n, n, [&](std::size_t r, std::vector<RowEntry>& out) {
    for (const auto& t : terms) {
      if (t.coef == 0.0) continue;
      std::int64_t base = static_cast<std::int64_t>(r);
      for (const auto& f : t.factors)
        base -= static_cast<std::int64_t>(basis.component(r, f.factor) * basis.stride(f.factor));
      // Depth-first walk over the nonzeros of each factor's row.
      auto walk = [&](auto&& self, std::size_t k, std::int64_t col, cplx val) -> void {
        if (k == t.factors.size()) {
          out.push_back({col, t.coef * val});
          return;
        }
        const auto& f = t.factors[k];
        const auto row = basis.component(r, f.factor);
        const auto stride = static_cast<std::int64_t>(basis.stride(f.factor));
        const auto& rp = f.op.row_ptr();
        for (auto q = rp[row]; q < rp[row + 1]; ++q)
          self(self, k + 1, col + f.op.col()[q] * stride, val * f.op.val()[q]);
      };
      walk(walk, 0, base, 1.0);
    }
  });
}

SparseMatrix matter_projection(const MatterOperators& matter, const std::array<double, 2>& e) {
  return dense_hermitian_to_sparse(e[0] * matter.px + e[1] * matter.py);
}

std::vector<KronTerm> system_terms(const CoupledBasis& basis, const MatterOperators& matter) {
  if (matter.size() != basis.matter_dim()) throw ConfigError("matter operators do not match the basis");
  std::vector<KronTerm> terms;
  terms.push_back({1.0, {{0, dense_hermitian_to_sparse(matter.h_el)}}});
  const auto& modes = basis.modes();
  const auto fs = mode_factors_in(basis);
  for (std::size_t a = 0; a < modes.size(); ++a) {
    const auto& m = modes[a];
    const std::size_t fa = fs[a];
    terms.push_back({1.0, {{fa, photon_hamiltonian(m)}}});
    if (m.lambda == 0.0) continue;
    const auto q = quadratures(m).q.matrix();
    terms.push_back({-m.lambda, {{0, matter_projection(matter, m.polarization)}, {fa, q}}});
    terms.push_back({0.5 * m.lambda * m.lambda, {{fa, q_squared_projected(m)}}});
    for (std::size_t b = 0; b < a; ++b) {
      const auto& mb = modes[b];
      const double c = m.lambda * mb.lambda * dot(m.polarization, mb.polarization);
      if (c == 0.0) continue;
      terms.push_back({c, {{static_cast<std::size_t>(fs[b]), quadratures(mb).q.matrix()}, {fa, q}}});
    }
  }
  return terms;
}

std::vector<KronTerm> bath_terms(const CoupledBasis& basis, const MatterOperators& matter, const SampledBath& bath) {
  if (!basis.has_bath()) throw ConfigError("basis has no bath factor");
  const auto& bb = basis.bath();
  if (bb.modes() != static_cast<int>(bath.modes.size())) throw ConfigError("bath basis does not match the sampled bath");
  const std::size_t bf = basis.bath_factor();
  const int m_count = bb.modes();
  std::vector<KronTerm> terms;

  std::vector<double> w(m_count);
  double zero_point = 0.0;
  for (int b = 0; b < m_count; ++b) {
    w[b] = bath.modes[b].omega;
    zero_point += 0.5 * w[b];
  }
  terms.push_back({1.0, {{bf, bb.number_form(w)}}});
  terms.push_back({zero_point, {{bf, SparseMatrix::identity(bb.size())}}});

  // Windows share one polarization, so the bilinear terms group per window.
  int n_windows = 0;
  for (int wi : bath.window_of_mode) n_windows = std::max(n_windows, wi + 1);
  const auto fs = mode_factors_in(basis);
  for (int win = 0; win < n_windows; ++win) {
    std::vector<double> c(m_count, 0.0);
    std::array<double, 2> e{0.0, 0.0};
    bool any = false;
    for (int b = 0; b < m_count; ++b) {
      if (bath.window_of_mode[b] != win) continue;
      const auto& mb = bath.modes[b];
      if (any && (mb.polarization != e)) throw ConfigError("bath window mixes polarizations");
      e = mb.polarization;
      any = true;
      c[b] = mb.lambda / std::sqrt(2.0 * mb.omega);
    }
    if (!any) continue;
    const SparseMatrix qw = bb.linear_form(c);
    terms.push_back({-1.0, {{0, matter_projection(matter, e)}, {bf, qw}}});
    for (std::size_t a = 0; a < basis.modes().size(); ++a) {
      const auto& m = basis.modes()[a];
      const double k = m.lambda * dot(m.polarization, e);
      if (k == 0.0) continue;
      terms.push_back({k, {{static_cast<std::size_t>(fs[a]), quadratures(m).q.matrix()}, {bf, qw}}});
    }
  }

  Eigen::MatrixXd kq(m_count, m_count);
  for (int b = 0; b < m_count; ++b)
    for (int c = 0; c < m_count; ++c) {
      const auto& x = bath.modes[b];
      const auto& y = bath.modes[c];
      kq(b, c) = x.lambda * y.lambda * dot(x.polarization, y.polarization) / (4.0 * std::sqrt(x.omega * y.omega));
    }
  terms.push_back({1.0, {{bf, bb.quadratic_form(kq)}}});
  return terms;
}

SparseHermitianOp assemble_coupled(const CoupledBasis& basis, const MatterOperators& matter, const SampledBath* bath) {
  auto terms = system_terms(basis, matter);
  if (bath) {
    auto bt = bath_terms(basis, matter, *bath);
    terms.insert(terms.end(), bt.begin(), bt.end());
  } else if (basis.has_bath()) {
    throw ConfigError("basis has a bath factor but no bath modes were given");
  }
  return SparseHermitianOp(assemble_kron_terms(basis, terms));
}

SparseHermitianOp assemble_system(const CoupledBasis& basis, const MatterOperators& matter,
                                  const MixingAngles& angles) {
  auto modes = basis.modes();
  apply_geometry(modes, angles, Geometry::kNonDegenerate);
  const auto b = rebuild_with_modes(basis, std::move(modes));
  return SparseHermitianOp(assemble_kron_terms(b, system_terms(b, matter)));
}

SparseHermitianOp assemble_degenerate(const CoupledBasis& basis, const MatterOperators& matter, double theta1) {
  if (basis.modes().size() != 2) throw ConfigError("degenerate system needs exactly modes 1 and 2");
  auto modes = basis.modes();
  apply_geometry(modes, MixingAngles{theta1, 0.0, 0.0}, Geometry::kDegenerate);
  const auto b = rebuild_with_modes(basis, std::move(modes));
  return SparseHermitianOp(assemble_kron_terms(b, system_terms(b, matter)));
}

SparseHermitianOp assemble_bath_terms(const CoupledBasis& basis, const MatterOperators& matter,
                                      const SampledBath& bath) {
  return SparseHermitianOp(assemble_kron_terms(basis, bath_terms(basis, matter, bath)));
}

SparseHermitianOp assemble_few_level(const std::vector<int>& levels, const MatterOperators& matter,
                                     const CoupledBasis& basis, const SampledBath* bath) {
  if (levels.empty()) throw ConfigError("few-level set is empty");
  std::set<int> chosen(levels.begin(), levels.end());
  if (chosen.size() != levels.size()) throw ConfigError("few-level set repeats a level");
  for (int s : levels) {
    if (s < 0 || s >= static_cast<int>(matter.size()))
      throw ConfigError("few-level index " + std::to_string(s) + " outside the solved basis");
    if (!matter.j_labels.empty())
      for (std::size_t o = 0; o < matter.size(); ++o)
        if (matter.j_labels[o] == matter.j_labels[s] && !chosen.count(static_cast<int>(o)))
          throw ConfigError("few-level set splits a degenerate level");
  }
  return assemble_coupled(basis, matter.restricted(levels), bath);
}

HamiltonianModel::HamiltonianModel(SparseHermitianOp h0)
    : h0_(std::make_shared<const SparseHermitianOp>(std::move(h0))) {}

void HamiltonianModel::add_term(TimeDependentTerm term) {
  if (!term.op || term.op->dim() != dim()) throw ConfigError("time-dependent term has the wrong dimension");
  if (!term.coeff) throw ConfigError("time-dependent term lacks a coefficient function");
  terms_.push_back(std::move(term));
}

void HamiltonianModel::apply(double t, const cplx* x, cplx* y) const {
  h0_->apply(x, y);
  for (const auto& term : terms_) {
    const double c = term.coeff(t);
    if (c != 0.0) term.op->apply_add(c, x, y);
  }
  if (scalar_) {
    const double s = scalar_(t);
    if (s != 0.0) kernels::parallel::axpy(dim(), s, x, y);
  }
}

}  // namespace pdc
