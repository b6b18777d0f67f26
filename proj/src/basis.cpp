#include "pdcqed/basis.hpp"

#include <limits>
#include <sstream>

#include "pdcqed/errors.hpp"

namespace pdc {

CoupledBasis::CoupledBasis(std::size_t matter_dim, std::vector<FockMode> modes, std::optional<BathBasis> bath)
    : modes_(std::move(modes)), bath_(std::move(bath)) {
  if (matter_dim < 1) throw ConfigError("matter dimension must be positive");
  factor_dims_.push_back(matter_dim);
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    modes_[i].validate();
    for (std::size_t j = 0; j < i; ++j)
      if (modes_[j].label == modes_[i].label) throw ConfigError("duplicate mode label");
    factor_dims_.push_back(modes_[i].dim());
  }
  if (bath_) factor_dims_.push_back(bath_->size());
  strides_.assign(factor_dims_.size(), 1);
  dim_ = 1;
  for (std::size_t f = factor_dims_.size(); f-- > 0;) {
    strides_[f] = dim_;
    if (dim_ > std::numeric_limits<std::size_t>::max() / factor_dims_[f])
      throw ResourceError("coupled basis dimension overflows");
    dim_ *= factor_dims_[f];
  }
}

bool CoupledBasis::has_mode(int label) const {
  for (const auto& m : modes_)
    if (m.label == label) return true;
  return false;
}

std::size_t CoupledBasis::mode_factor(int label) const {
  for (std::size_t i = 0; i < modes_.size(); ++i)
    if (modes_[i].label == label) return i + 1;
  throw ConfigError("mode " + std::to_string(label) + " is not part of the basis");
}

const FockMode& CoupledBasis::mode(int label) const { return modes_[mode_factor(label) - 1]; }

const BathBasis& CoupledBasis::bath() const {
  if (!bath_) throw ConfigError("basis has no bath");
  return *bath_;
}

std::size_t CoupledBasis::bath_factor() const {
  if (!bath_) throw ConfigError("basis has no bath");
  return factor_dims_.size() - 1;
}

std::size_t CoupledBasis::flatten(const std::vector<std::size_t>& labels) const {
  if (labels.size() != factor_dims_.size()) throw ConfigError("flatten: wrong number of factors");
  std::size_t idx = 0;
  for (std::size_t f = 0; f < labels.size(); ++f) {
    if (labels[f] >= factor_dims_[f]) throw ConfigError("flatten: label out of range");
    idx += labels[f] * strides_[f];
  }
  return idx;
}

std::vector<std::size_t> CoupledBasis::unflatten(std::size_t idx) const {
  if (idx >= dim_) throw ConfigError("unflatten: index out of range");
  std::vector<std::size_t> labels(factor_dims_.size());
  for (std::size_t f = 0; f < labels.size(); ++f) labels[f] = (idx / strides_[f]) % factor_dims_[f];
  return labels;
}

std::string CoupledBasis::descriptor() const {
  std::ostringstream s;
  s << "matter:" << matter_dim();
  for (const auto& m : modes_) s << ";mode" << m.label << ":" << m.dim();
  if (bath_) s << ";bath:" << bath_->modes() << "x" << bath_->sector();
  return s.str();
}

}  // namespace pdc
