#pragma once

// Electron in a two-dimensional quantum ring: finite-difference Hamiltonian,
// lowest eigenstates with definite angular momentum, and transition matrices.

#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "pdcqed/sparse.hpp"

namespace pdc {

struct GridSpec {
  int nx = 127;
  int ny = 127;
  double dx = 0.0;  // eff. units
  double dy = 0.0;
  int stencil_order = 8;

  void validate() const;
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  double x(int i) const { return (i - 0.5 * (nx - 1)) * dx; }
  double y(int j) const { return (j - 0.5 * (ny - 1)) * dy; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * ny + j; }
};

// 127 x 127 points at 0.7052 nm.
GridSpec default_grid();

struct RingPotentialParams {
  double omega0 = 0.0;  // eff. energy
  double d = 0.0;       // eff. length
  double v0 = 0.0;      // eff. energy

  void validate() const;
  double operator()(double x, double y) const;
};

// omega0 = 10 meV, d = 10 nm, the given peak height.
RingPotentialParams ring_potential_meV(double v0_meV);

struct MatterEigenbasis {
  std::vector<double> energies;  // diag of h_el, ascending
  CMatrix states;                // grid x n_states, sum |psi|^2 dx dy = 1
  std::vector<int> l_labels;
  std::vector<int> j_labels;     // 1-based level ordinal, one per degenerate group
  std::vector<double> lz;        // <L_z> before rounding
  CMatrix h_el;                  // <i|H|j>; off-diagonal only inside grid-split groups
  GridSpec grid;

  std::size_t size() const { return energies.size(); }
};

struct TransitionMatrices {
  CMatrix x_dip, y_dip;  // <i|x|j>, <i|y|j>; complex Hermitian for l-eigenstates
  CMatrix px, py;        // <i|-i d/dx|j>, <i|-i d/dy|j>
};

enum class LevelCut { kError, kExtend, kTruncate };

struct MatterSolveOptions {
  double tol = 1e-10;
  double degeneracy_rel_tol = 1e-3;  // relative gap below which states are grouped
  int guard = 6;
  LevelCut level_cut = LevelCut::kError;
  // Off: accept groups whose <L_z> is not near an integer (l and l +- 4 mix on
  // the square grid when they are exactly degenerate, as at V0 = 0) and round.
  bool strict_angular_momentum = true;
};

// Centered finite-difference weights, offsets -order/2..order/2.
std::vector<double> fd_second_derivative_weights(int order);
std::vector<double> fd_first_derivative_weights(int order);

// d/dx (axis 0) or d/dy (axis 1) with zero boundary values.
SparseMatrix derivative_matrix(const GridSpec& grid, int axis);
Eigen::SparseMatrix<double> build_ring_hamiltonian_real(const GridSpec& grid, const RingPotentialParams& pot);
SparseHermitianOp build_ring_hamiltonian(const GridSpec& grid, const RingPotentialParams& pot);

// Lowest eigenpairs, already rotated to definite angular momentum.
MatterEigenbasis solve_eigenstates(const SparseHermitianOp& h, const GridSpec& grid, int n_states,
                                   const MatterSolveOptions& opt = {});

// Groups near-degenerate states and diagonalizes L_z inside each group.
// `basis.h_el` must be diagonal on entry (raw eigenpairs).
MatterEigenbasis classify_angular_momentum(MatterEigenbasis basis, double degeneracy_rel_tol = 1e-3);

TransitionMatrices transition_matrices(const MatterEigenbasis& basis, const GridSpec& grid);

// Matter operators in the truncated eigenbasis, the form the coupled
// Hamiltonian consumes.
struct MatterOperators {
  CMatrix h_el;
  CMatrix px, py;
  CMatrix x_dip, y_dip;
  std::vector<int> l_labels;
  std::vector<int> j_labels;

  std::size_t size() const { return static_cast<std::size_t>(h_el.rows()); }
  // Keep the listed states (0-based, in this order).
  MatterOperators restricted(const std::vector<int>& states) const;
};

MatterOperators make_matter_operators(const MatterEigenbasis& basis, const TransitionMatrices& tm);

// Full pipeline with the default grid.
struct MatterModel {
  RingPotentialParams potential;
  MatterEigenbasis basis;
  TransitionMatrices transitions;
  MatterOperators ops;
};
MatterModel solve_ring(double v0_meV, int n_states, const MatterSolveOptions& opt = {},
                       const GridSpec& grid = default_grid());
MatterModel solve_ring(const RingPotentialParams& pot, int n_states, const MatterSolveOptions& opt,
                       const GridSpec& grid);

// Versioned binary container: header, grid, potential, energies, labels,
// h_el, transition matrices and row-major wavefunction grids.
void save_matter(const std::string& path, const MatterModel& m);
MatterModel load_matter(const std::string& path);

}  // namespace pdc
