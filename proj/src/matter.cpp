#include "pdcqed/matter.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdcqed/eigensolver.hpp"
#include "pdcqed/errors.hpp"
#include "pdcqed/units.hpp"

namespace pdc {

void GridSpec::validate() const {
  if (stencil_order != 2 && stencil_order != 4 && stencil_order != 6 && stencil_order != 8)
    throw ConfigError("stencil_order must be 2, 4, 6 or 8");
  if (nx < stencil_order + 1 || ny < stencil_order + 1)
    throw ConfigError("grid too small for the finite-difference stencil");
  if (nx % 2 == 0 || ny % 2 == 0) throw ConfigError("grid point counts must be odd");
  if (!(dx > 0.0) || !(dy > 0.0)) throw ConfigError("grid spacing must be positive");
}

GridSpec default_grid() {
  GridSpec g;
  g.dx = g.dy = length_to_eff(0.7052);
  return g;
}

void RingPotentialParams::validate() const {
  if (!(omega0 > 0.0)) throw ConfigError("ring potential: omega0 must be positive");
  if (!(d > 0.0)) throw ConfigError("ring potential: d must be positive");
  if (!(v0 >= 0.0)) throw ConfigError("ring potential: v0 must be non-negative");
}

double RingPotentialParams::operator()(double x, double y) const {
  const double r2 = x * x + y * y;
  return 0.5 * omega0 * omega0 * r2 + v0 * std::exp(-r2 / (d * d));
}

RingPotentialParams ring_potential_meV(double v0_meV) {
  return {energy_to_eff(10.0), length_to_eff(10.0), energy_to_eff(v0_meV)};
}

std::vector<double> fd_second_derivative_weights(int order) {
  switch (order) {
    case 2: return {1.0, -2.0, 1.0};
    case 4: return {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
    case 6: return {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
    case 8:
      return {-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
    default: throw ConfigError("unsupported stencil order");
  }
}

std::vector<double> fd_first_derivative_weights(int order) {
  switch (order) {
    case 2: return {-0.5, 0.0, 0.5};
    case 4: return {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
    case 6: return {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
    case 8:
      return {1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0, 4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
    default: throw ConfigError("unsupported stencil order");
  }
}

SparseMatrix derivative_matrix(const GridSpec& grid, int axis) {
  grid.validate();
  const auto w = fd_first_derivative_weights(grid.stencil_order);
  const int half = grid.stencil_order / 2;
  const double h = axis == 0 ? grid.dx : grid.dy;
  return SparseMatrix::assemble_rows(grid.size(), grid.size(), [&](std::size_t r, std::vector<RowEntry>& out) {
    const int i = static_cast<int>(r / grid.ny), j = static_cast<int>(r % grid.ny);
    for (int k = -half; k <= half; ++k) {
      if (k == 0) continue;
      const int ii = axis == 0 ? i + k : i, jj = axis == 0 ? j : j + k;
      if (ii < 0 || ii >= grid.nx || jj < 0 || jj >= grid.ny) continue;
      out.push_back({static_cast<std::int64_t>(grid.index(ii, jj)), w[k + half] / h});
    }
  });
}

Eigen::SparseMatrix<double> build_ring_hamiltonian_real(const GridSpec& grid, const RingPotentialParams& pot) {
  grid.validate();
  pot.validate();
  const auto w = fd_second_derivative_weights(grid.stencil_order);
  const int half = grid.stencil_order / 2;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(grid.size() * (2 * grid.stencil_order + 1));
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      const auto r = static_cast<int>(grid.index(i, j));
      t.emplace_back(r, r, pot(grid.x(i), grid.y(j)));
      for (int k = -half; k <= half; ++k) {
        if (i + k >= 0 && i + k < grid.nx)
          t.emplace_back(r, static_cast<int>(grid.index(i + k, j)), -0.5 * w[k + half] / (grid.dx * grid.dx));
        if (j + k >= 0 && j + k < grid.ny)
          t.emplace_back(r, static_cast<int>(grid.index(i, j + k)), -0.5 * w[k + half] / (grid.dy * grid.dy));
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::SparseMatrix<double> h(n, n);
  h.setFromTriplets(t.begin(), t.end());
  h.makeCompressed();
  return h;
}

SparseHermitianOp build_ring_hamiltonian(const GridSpec& grid, const RingPotentialParams& pot) {
  const auto h = build_ring_hamiltonian_real(grid, pot);
  std::vector<Triplet> t;
  t.reserve(h.nonZeros());
  for (Eigen::Index k = 0; k < h.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(h, k); it; ++it)
      t.push_back({it.row(), it.col(), it.value()});
  return SparseHermitianOp(SparseMatrix::from_triplets(grid.size(), grid.size(), std::move(t)));
}

namespace {

Eigen::SparseMatrix<double> real_part_checked(const SparseMatrix& m) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(m.nnz());
  const double scale = std::max(1.0, m.max_abs());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (auto k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
      if (std::abs(m.val()[k].imag()) > 1e-14 * scale)
        throw NumericalError("matter eigensolver expects a real Hamiltonian");
      t.emplace_back(static_cast<int>(i), m.col()[k], m.val()[k].real());
    }
  }
  Eigen::SparseMatrix<double> a(m.rows(), m.cols());
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  return a;
}

CVector apply_lz(const GridSpec& g, const SparseMatrix& dx, const SparseMatrix& dy, const CVector& v) {
  const CVector vx = dx * v, vy = dy * v;
  CVector out(v.size());
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const auto r = g.index(i, j);
      out(r) = cplx(0.0, -1.0) * (g.x(i) * vy(r) - g.y(j) * vx(r));
    }
  return out;
}

// Rotates each column so its largest component is real and positive; returns the phases applied.
std::vector<cplx> fix_phase(CMatrix& s) {
  std::vector<cplx> ph(s.cols(), 1.0);
  for (Eigen::Index c = 0; c < s.cols(); ++c) {
    Eigen::Index imax = 0;
    s.col(c).cwiseAbs().maxCoeff(&imax);
    const cplx z = s(imax, c);
    if (std::abs(z) > 0.0) ph[c] = std::conj(z) / std::abs(z);
    s.col(c) *= ph[c];
  }
  return ph;
}

}  // namespace

namespace {

MatterEigenbasis classify_impl(MatterEigenbasis b, double rel_tol, bool partial_tail, bool strict = true) {
  const auto& g = b.grid;
  const SparseMatrix dx = derivative_matrix(g, 0), dy = derivative_matrix(g, 1);
  const auto n = static_cast<Eigen::Index>(b.size());
  const double w = g.dx * g.dy;
  std::vector<double> e(n);
  for (Eigen::Index i = 0; i < n; ++i) e[i] = b.h_el(i, i).real();

  CMatrix h_new = CMatrix::Zero(n, n);
  b.l_labels.assign(n, 0);
  b.j_labels.assign(n, 0);
  b.lz.assign(n, 0.0);
  int level = 0;
  Eigen::Index i0 = 0;
  while (i0 < n) {
    Eigen::Index i1 = i0 + 1;
    while (i1 < n && e[i1] - e[i1 - 1] <= rel_tol * std::max(std::abs(e[i1 - 1]), 1e-300)) ++i1;
    const Eigen::Index m = i1 - i0;
    ++level;

    CMatrix lz(m, m);
    std::vector<CVector> lv;
    for (Eigen::Index a = 0; a < m; ++a) lv.push_back(apply_lz(g, dx, dy, b.states.col(i0 + a)));
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index c = 0; c < m; ++c) lz(a, c) = b.states.col(i0 + a).dot(lv[c]) * w;
    lz = 0.5 * (lz + lz.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(lz);

    // Descending angular momentum, so +l precedes -l.
    CMatrix c(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      const Eigen::Index src = m - 1 - a;
      c.col(a) = es.eigenvectors().col(src);
      const double val = es.eigenvalues()(src);
      const double rounded = std::round(val);
      if (strict && std::abs(val - rounded) > 0.1 && !(partial_tail && i1 == n)) {
        std::ostringstream msg;
        msg << "angular momentum classification failed: <Lz> = " << val << " for state " << i0 + a
            << " (grid under-resolved or degeneracy tolerance too tight)";
        throw NumericalError(msg.str());
      }
      b.lz[i0 + a] = val;
      b.l_labels[i0 + a] = static_cast<int>(rounded);
      b.j_labels[i0 + a] = level;
    }
    const CMatrix block = b.h_el.block(i0, i0, m, m);
    h_new.block(i0, i0, m, m) = c.adjoint() * block * c;
    b.states.middleCols(i0, m) = (b.states.middleCols(i0, m) * c).eval();
    i0 = i1;
  }
  // The phase fix is a diagonal unitary; apply it to h_el too.
  const auto ph = fix_phase(b.states);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) h_new(i, j) *= std::conj(ph[i]) * ph[j];
  b.h_el = 0.5 * (h_new + h_new.adjoint());
  for (Eigen::Index i = 0; i < n; ++i) b.energies[i] = b.h_el(i, i).real();
  return b;
}

// Start of the last group of near-degenerate energies.
int trailing_group_start(const Eigen::VectorXd& e, double rel_tol) {
  int s = static_cast<int>(e.size()) - 1;
  while (s > 0 && e(s) - e(s - 1) <= rel_tol * std::max(std::abs(e(s - 1)), 1e-300)) --s;
  return s;
}

}  // namespace

MatterEigenbasis classify_angular_momentum(MatterEigenbasis b, double rel_tol) {
  return classify_impl(std::move(b), rel_tol, false);
}

MatterEigenbasis solve_eigenstates(const SparseHermitianOp& h, const GridSpec& grid, int n_states,
                                   const MatterSolveOptions& opt) {
  grid.validate();
  if (h.dim() != grid.size()) throw ConfigError("Hamiltonian dimension does not match the grid");
  if (n_states < 1 || static_cast<std::size_t>(n_states) > h.dim())
    throw ConfigError("n_states must be between 1 and the grid size");
  const int nev = static_cast<int>(std::min<std::size_t>(n_states + opt.guard, h.dim()));

  SymEigenOptions so;
  so.tol = opt.tol;
  const auto raw = lowest_eigenpairs(real_part_checked(h.matrix()), nev, so);

  // The highest computed group may be incomplete, so only groups below it are trusted.
  int avail = nev;
  if (nev < static_cast<int>(h.dim())) avail = trailing_group_start(raw.values, opt.degeneracy_rel_tol);
  const bool tail_cut = avail < n_states;
  if (tail_cut && opt.level_cut != LevelCut::kTruncate) {
    if (opt.level_cut == LevelCut::kError)
      throw ConfigError("n_states = " + std::to_string(n_states) +
                        " splits a degenerate level; choose a count that closes the level");
    throw NumericalError("degenerate level extends past the guard states; raise the guard count");
  }
  const int used = avail;
  if (used < 1) throw NumericalError("no complete degenerate level among the computed states; raise the guard count");

  MatterEigenbasis b;
  b.grid = grid;
  b.energies.assign(raw.values.data(), raw.values.data() + used);
  b.states = raw.vectors.leftCols(used).cast<cplx>() / std::sqrt(grid.dx * grid.dy);
  b.h_el = raw.values.head(used).cast<cplx>().asDiagonal();
  b = classify_impl(std::move(b), opt.degeneracy_rel_tol, false, opt.strict_angular_momentum);

  int keep = std::min(n_states, used);
  if (keep < used && b.j_labels[keep] == b.j_labels[keep - 1]) {
    if (opt.level_cut == LevelCut::kError)
      throw ConfigError("n_states = " + std::to_string(n_states) +
                        " splits a degenerate level; choose a count that closes the level");
    if (opt.level_cut == LevelCut::kExtend) {
      while (keep < used && b.j_labels[keep] == b.j_labels[keep - 1]) ++keep;
    } else {
      while (keep > 0 && b.j_labels[keep] == b.j_labels[keep - 1]) --keep;
    }
  }

  b.energies.resize(keep);
  b.states = b.states.leftCols(keep).eval();
  b.l_labels.resize(keep);
  b.j_labels.resize(keep);
  b.lz.resize(keep);
  b.h_el = b.h_el.topLeftCorner(keep, keep).eval();
  return b;
}

TransitionMatrices transition_matrices(const MatterEigenbasis& b, const GridSpec& g) {
  if (static_cast<std::size_t>(b.states.rows()) != g.size())
    throw ConfigError("basis does not live on this grid");
  const double w = g.dx * g.dy;
  const auto n = b.states.cols();
  CMatrix xs(b.states.rows(), n), ys(b.states.rows(), n);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const auto r = static_cast<Eigen::Index>(g.index(i, j));
      xs.row(r) = g.x(i) * b.states.row(r);
      ys.row(r) = g.y(j) * b.states.row(r);
    }
  const SparseMatrix dx = derivative_matrix(g, 0), dy = derivative_matrix(g, 1);
  CMatrix dxs(b.states.rows(), n), dys(b.states.rows(), n);
  for (Eigen::Index c = 0; c < n; ++c) {
    dxs.col(c) = dx * CVector(b.states.col(c));
    dys.col(c) = dy * CVector(b.states.col(c));
  }
  const auto herm = [](const CMatrix& m) { return CMatrix(0.5 * (m + m.adjoint())); };
  TransitionMatrices t;
  t.x_dip = herm(b.states.adjoint() * xs * w);
  t.y_dip = herm(b.states.adjoint() * ys * w);
  t.px = herm(cplx(0.0, -1.0) * (b.states.adjoint() * dxs) * w);
  t.py = herm(cplx(0.0, -1.0) * (b.states.adjoint() * dys) * w);
  return t;
}

MatterOperators MatterOperators::restricted(const std::vector<int>& states) const {
  const auto n = static_cast<Eigen::Index>(states.size());
  for (int s : states)
    if (s < 0 || s >= static_cast<int>(size())) throw ConfigError("level index out of range");
  MatterOperators r;
  auto pick = [&](const CMatrix& m) {
    CMatrix o(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index c = 0; c < n; ++c) o(a, c) = m(states[a], states[c]);
    return o;
  };
  r.h_el = pick(h_el);
  r.px = pick(px);
  r.py = pick(py);
  r.x_dip = pick(x_dip);
  r.y_dip = pick(y_dip);
  for (int s : states) {
    r.l_labels.push_back(l_labels.empty() ? 0 : l_labels[s]);
    r.j_labels.push_back(j_labels.empty() ? 0 : j_labels[s]);
  }
  return r;
}

MatterOperators make_matter_operators(const MatterEigenbasis& b, const TransitionMatrices& t) {
  MatterOperators m;
  m.h_el = b.h_el;
  m.px = t.px;
  m.py = t.py;
  m.x_dip = t.x_dip;
  m.y_dip = t.y_dip;
  m.l_labels = b.l_labels;
  m.j_labels = b.j_labels;
  return m;
}

MatterModel solve_ring(double v0_meV, int n_states, const MatterSolveOptions& opt, const GridSpec& grid) {
  return solve_ring(ring_potential_meV(v0_meV), n_states, opt, grid);
}

MatterModel solve_ring(const RingPotentialParams& pot, int n_states, const MatterSolveOptions& opt,
                       const GridSpec& grid) {
  MatterModel mm;
  mm.potential = pot;
  const auto h = build_ring_hamiltonian(grid, pot);
  mm.basis = solve_eigenstates(h, grid, n_states, opt);
  mm.transitions = transition_matrices(mm.basis, grid);
  mm.ops = make_matter_operators(mm.basis, mm.transitions);
  return mm;
}

}  // namespace pdc
