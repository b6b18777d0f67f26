#pragma once

// Coupled light-matter Hamiltonians in the velocity gauge, dipole
// approximation, with the matter in its truncated eigenbasis:
//
//   H = h_el + sum_a w_a (n_a + 1/2) - sum_a lambda_a q_a (e_a . P)
//       + 1/2 | sum_a lambda_a q_a e_a |^2
//
// Every mode carries its own polarization e_a; the mixing-angle geometries
// below only choose those vectors.

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pdcqed/basis.hpp"
#include "pdcqed/matter.hpp"
#include "pdcqed/photon.hpp"

namespace pdc {

struct MixingAngles {
  double theta1 = 0.0;  // radians
  double theta2 = 0.0;
  double theta3 = 0.0;
};

enum class Geometry {
  kNonDegenerate,  // e1 = x, e2 = (-sin t2, cos t2), e3 = (sin t3, cos t3)
  kDegenerate,     // e1 = (cos t1, sin t1), e2 = y
};

std::array<double, 2> polarization_for(int label, const MixingAngles& angles, Geometry g);
void apply_geometry(std::vector<FockMode>& modes, const MixingAngles& angles, Geometry g);

// One tensor-product term: coef * (op_f1 x op_f2 x ...), identity elsewhere.
struct KronFactor {
  std::size_t factor;
  SparseMatrix op;
};
struct KronTerm {
  cplx coef = 1.0;
  std::vector<KronFactor> factors;
};

// Row-wise assembly of a sum of Kronecker terms; memory is the final CSR only.
SparseMatrix assemble_kron_terms(const CoupledBasis& basis, const std::vector<KronTerm>& terms);

// e . P in the matter eigenbasis as a sparse matrix.
SparseMatrix matter_projection(const MatterOperators& matter, const std::array<double, 2>& e);

// Terms of the system Hamiltonian for the modes present in `basis`, using
// their stored polarizations and couplings.
std::vector<KronTerm> system_terms(const CoupledBasis& basis, const MatterOperators& matter);
// Bath energy, bath-matter coupling, main-bath and bath-bath diamagnetic terms.
std::vector<KronTerm> bath_terms(const CoupledBasis& basis, const MatterOperators& matter, const SampledBath& bath);

// Generic entry point: system plus optional bath, certified Hermitian.
SparseHermitianOp assemble_coupled(const CoupledBasis& basis, const MatterOperators& matter,
                                   const SampledBath* bath = nullptr);

// Three-mode non-degenerate system; polarizations from the angles.
SparseHermitianOp assemble_system(const CoupledBasis& basis, const MatterOperators& matter,
                                  const MixingAngles& angles);
// Two-mode degenerate system, e2 = y and e1 = (cos t1, sin t1).
SparseHermitianOp assemble_degenerate(const CoupledBasis& basis, const MatterOperators& matter, double theta1);
SparseHermitianOp assemble_bath_terms(const CoupledBasis& basis, const MatterOperators& matter,
                                      const SampledBath& bath);
// Matter restricted to `levels` (0-based eigenbasis indices); basis.matter_dim() must equal levels.size().
SparseHermitianOp assemble_few_level(const std::vector<int>& levels, const MatterOperators& matter,
                                     const CoupledBasis& basis, const SampledBath* bath = nullptr);

// ---------------------------------------------------------------------------
// Time dependence: H(t) = H0 + sum_k c_k(t) V_k + s(t) * 1, with fixed sparse
// patterns V_k and scalar coefficient functions.

struct TimeDependentTerm {
  std::string name;
  std::shared_ptr<const SparseHermitianOp> op;
  std::function<double(double)> coeff;
};

class HamiltonianModel {
 public:
  HamiltonianModel() = default;
  explicit HamiltonianModel(SparseHermitianOp h0);

  void add_term(TimeDependentTerm term);
  void set_scalar(std::function<double(double)> s) { scalar_ = std::move(s); }

  std::size_t dim() const { return h0_ ? h0_->dim() : 0; }
  bool time_dependent() const { return !terms_.empty() || static_cast<bool>(scalar_); }
  const SparseHermitianOp& static_part() const { return *h0_; }
  const std::vector<TimeDependentTerm>& terms() const { return terms_; }

  // y = H(t) x
  void apply(double t, const cplx* x, cplx* y) const;
  double scalar(double t) const { return scalar_ ? scalar_(t) : 0.0; }

 private:
  std::shared_ptr<const SparseHermitianOp> h0_;
  std::vector<TimeDependentTerm> terms_;
  std::function<double(double)> scalar_;
};

}  // namespace pdc
