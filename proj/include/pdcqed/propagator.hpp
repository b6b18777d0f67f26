#pragma once

#include <functional>
#include <string>

#include "pdcqed/basis.hpp"
#include "pdcqed/hamiltonian.hpp"
#include "pdcqed/sparse.hpp"

namespace pdc {

struct CoupledState {
  CVector amplitudes;
  double time = 0.0;  // eff. units
};

using MatVec = std::function<void(const cplx*, cplx*)>;

struct KrylovOptions {
  int max_dim = 20;
  double tol = 1e-12;       // local error estimate per step
  double norm_tol = 1e-8;   // larger norm defects are errors, smaller ones are renormalized
};

struct StepInfo {
  int krylov_dim = 0;
  double error_estimate = 0.0;
  double norm_defect = 0.0;
};

// psi <- exp(-i H dt) psi by Lanczos with full reorthogonalization. The
// subspace grows until the residual estimate drops below tol; hitting max_dim
// throws StepSizeError.
StepInfo krylov_step_inplace(const MatVec& h, CVector& psi, double dt, const KrylovOptions& opt = {});

CoupledState krylov_step(const SparseHermitianOp& h, const CoupledState& psi, double dt,
                         const KrylovOptions& opt = {});

struct PropagatorConfig {
  double dt = 0.0;     // eff. units
  double t_end = 0.0;  // eff. units
  int krylov_dim = 20;
  double krylov_tol = 1e-12;
  int record_stride = 1;
  int checkpoint_every = 0;  // steps; 0 disables
  std::string checkpoint_path;

  void validate() const;
};

using Observer = std::function<void(const CoupledState&)>;

struct PropagationReport {
  std::size_t steps = 0;
  int max_krylov_dim = 0;
  double max_error_estimate = 0.0;
  double max_norm_defect = 0.0;
  double total_norm_defect = 0.0;  // sum of per-step defects before renormalization
  CoupledState final_state;
};

// Steps from psi0.time to t_end; time-dependent coefficients are taken at step
// midpoints. The observer sees the initial state, every record_stride-th step,
// and the final state.
PropagationReport propagate(const HamiltonianModel& h, CoupledState psi0, const PropagatorConfig& cfg,
                            const Observer& observer = {}, const CoupledBasis* basis_for_checkpoints = nullptr);

struct GroundStateResult {
  CoupledState state;
  double energy = 0.0;
  double residual = 0.0;
  int restarts = 0;
};

struct GroundStateOptions {
  int subspace = 60;
  int max_restarts = 500;
  double tol = 1e-9;  // on ||H psi - E psi||
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

// Lowest eigenvector by restarted Lanczos. `start` seeds the iteration if non-empty.
GroundStateResult ground_state(const SparseHermitianOp& h, const GroundStateOptions& opt = {},
                               const CVector& start = CVector());

// Versioned binary checkpoint: basis descriptor, time, amplitudes.
void write_checkpoint(const std::string& path, const CoupledState& s, const std::string& descriptor);
CoupledState read_checkpoint(const std::string& path, const std::string& expected_descriptor = {});

}  // namespace pdc
