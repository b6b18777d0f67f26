#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdcqed/photon.hpp"

namespace pdc {

// Tensor-product basis matter x mode_1 x ... x mode_k [x bath sector].
// Linear index is row-major with matter most significant.
class CoupledBasis {
 public:
  CoupledBasis() = default;
  CoupledBasis(std::size_t matter_dim, std::vector<FockMode> modes, std::optional<BathBasis> bath = std::nullopt);

  std::size_t dimension() const { return dim_; }
  std::size_t matter_dim() const { return factor_dims_.front(); }
  std::size_t factor_count() const { return factor_dims_.size(); }
  std::size_t factor_dim(std::size_t f) const { return factor_dims_.at(f); }
  std::size_t stride(std::size_t f) const { return strides_.at(f); }

  const std::vector<FockMode>& modes() const { return modes_; }
  bool has_mode(int label) const;
  // Factor index of the mode with this label; throws ConfigError if absent.
  std::size_t mode_factor(int label) const;
  const FockMode& mode(int label) const;
  bool has_bath() const { return bath_.has_value(); }
  const BathBasis& bath() const;
  std::size_t bath_factor() const;

  std::size_t flatten(const std::vector<std::size_t>& labels) const;
  std::vector<std::size_t> unflatten(std::size_t idx) const;
  std::size_t component(std::size_t idx, std::size_t f) const { return (idx / strides_[f]) % factor_dims_[f]; }

  // Human-readable shape used to match checkpoints to bases.
  std::string descriptor() const;

 private:
  std::vector<FockMode> modes_;
  std::optional<BathBasis> bath_;
  std::vector<std::size_t> factor_dims_;
  std::vector<std::size_t> strides_;
  std::size_t dim_ = 0;
};

}  // namespace pdc
