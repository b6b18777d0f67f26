#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdcqed/sparse.hpp"
#include "pdcqed/units.hpp"

namespace pdc {

struct FockMode {
  int label = 1;  // 1, 2, 3 for main modes; 100+ for bath modes
  double omega = 0.0;
  int n_max = 1;  // highest retained photon number
  double lambda = 0.0;
  std::array<double, 2> polarization{1.0, 0.0};

  void validate() const;
  std::size_t dim() const { return static_cast<std::size_t>(n_max) + 1; }
};

double dot(const std::array<double, 2>& a, const std::array<double, 2>& b);

struct LadderOps {
  SparseMatrix annihilate;
  SparseMatrix create;
};
LadderOps ladder_ops(const FockMode& mode);

struct Quadratures {
  SparseHermitianOp q;  // sqrt(1/2w) (a + a^dag)
  SparseHermitianOp p;  // i sqrt(w/2) (a^dag - a)
};
Quadratures quadratures(const FockMode& mode);

SparseMatrix number_operator(const FockMode& mode);
// w (n + 1/2) on the retained levels.
SparseMatrix photon_hamiltonian(const FockMode& mode);
// q^2 projected from the untruncated space, exact on every retained level:
// (a^2 + a^dag^2 + 2n + 1) / (2w).
SparseMatrix q_squared_projected(const FockMode& mode);

// Poisson mass above n_max for mean |xi|^2.
double poisson_tail(double mean, int n_max);

// Truncated, renormalized coherent state. Throws ConfigError if the dropped
// tail exceeds tail_tol.
CVector coherent_state(cplx xi, int n_max, double tail_tol = 1e-6);

// ---------------------------------------------------------------------------
// Bath modes and the restricted few-photon sector.

struct BathWindow {
  double low_meV = 0.0;
  double high_meV = 0.0;
  int n_modes = 0;
  int parent_label = 2;  // main mode whose polarization the window inherits
};

struct BathSpec {
  std::vector<BathWindow> windows;
  double lambda_bath = 0.007;
  int sector = 2;          // max total bath photons
  int n_max_per_mode = 2;  // per-mode cap inside the sector

  void validate() const;
  int count() const;
};

// Configurations of M bath modes with at most `sector` (<= 2) photons in total,
// stored as sorted mode-index lists. Index order: vacuum, one-photon states by
// mode, then pairs (i <= j) ordered by j then i.
class BathBasis {
 public:
  BathBasis() = default;
  BathBasis(int n_modes, int sector, int n_max_per_mode = 2);

  int modes() const { return m_; }
  int sector() const { return sector_; }
  std::size_t size() const { return configs_.size(); }

  const std::vector<int>& config(std::size_t idx) const { return configs_.at(idx); }
  std::optional<std::size_t> find(const std::vector<int>& config) const;
  std::size_t index(const std::vector<int>& config) const;
  int occupation(std::size_t idx, int mode) const;
  int photons(std::size_t idx) const { return static_cast<int>(configs_[idx].size()); }

  // sum_b c_b (a_b + a_b^dag), projected.
  SparseMatrix linear_form(const std::vector<double>& c) const;
  // sum_{b,b'} K_bb' (a_b + a_b^dag)(a_b' + a_b'^dag), projected from the full space.
  SparseMatrix quadratic_form(const Eigen::MatrixXd& k) const;
  // sum_b w_b n_b
  SparseMatrix number_form(const std::vector<double>& w) const;

 private:
  int m_ = 0;
  int sector_ = 0;
  int n_cap_ = 2;
  std::vector<std::vector<int>> configs_;
};

struct SampledBath {
  std::vector<FockMode> modes;   // labels 100, 101, ...
  std::vector<int> window_of_mode;
  BathBasis basis;
};

// Equally spaced frequencies per window, endpoints included. Polarizations come
// from `parent_polarization(parent_label)`.
SampledBath sample_bath(const BathSpec& spec,
                        const std::function<std::array<double, 2>(int)>& parent_polarization,
                        const UnitSystem& u = default_units());

}  // namespace pdc
