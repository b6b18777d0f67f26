#include <algorithm>
#include <cmath>

#include "pdcqed/errors.hpp"
#include "pdcqed/photon.hpp"

namespace pdc {

void BathSpec::validate() const {
  if (sector < 0 || sector > 2) throw ConfigError("bath sector must be 0, 1 or 2");
  if (n_max_per_mode < 1) throw ConfigError("bath n_max_per_mode must be at least 1");
  if (!(lambda_bath >= 0.0)) throw ConfigError("bath coupling must be non-negative");
  std::vector<BathWindow> w = windows;
  for (const auto& x : w) {
    if (!(x.low_meV > 0.0) || !(x.high_meV > 0.0)) throw ConfigError("bath window bounds must be positive");
    if (x.high_meV < x.low_meV) throw ConfigError("bath window has high < low");
    if (x.n_modes < 1) throw ConfigError("bath window needs at least one mode");
    if (x.n_modes > 1 && x.high_meV == x.low_meV) throw ConfigError("bath window of zero width with several modes");
  }
  std::sort(w.begin(), w.end(), [](const BathWindow& a, const BathWindow& b) { return a.low_meV < b.low_meV; });
  for (std::size_t k = 1; k < w.size(); ++k)
    if (w[k].low_meV <= w[k - 1].high_meV) throw ConfigError("bath windows overlap");
}

int BathSpec::count() const {
  int n = 0;
  for (const auto& w : windows) n += w.n_modes;
  return n;
}

BathBasis::BathBasis(int n_modes, int sector, int n_max_per_mode)
    : m_(n_modes), sector_(sector), n_cap_(n_max_per_mode) {
  if (n_modes < 0) throw ConfigError("bath mode count must be non-negative");
  if (sector < 0 || sector > 2) throw ConfigError("bath sector must be 0, 1 or 2");
  if (n_max_per_mode < 1) throw ConfigError("bath n_max_per_mode must be at least 1");
  configs_.push_back({});
  if (sector >= 1)
    for (int i = 0; i < m_; ++i) configs_.push_back({i});
  if (sector >= 2)
    for (int j = 0; j < m_; ++j)
      for (int i = 0; i <= j; ++i)
        if (i != j || n_cap_ >= 2) configs_.push_back({i, j});
}

std::optional<std::size_t> BathBasis::find(const std::vector<int>& c) const {
  std::vector<int> s = c;
  std::sort(s.begin(), s.end());
  for (int b : s)
    if (b < 0 || b >= m_) return std::nullopt;
  if (static_cast<int>(s.size()) > sector_) return std::nullopt;
  if (s.empty()) return 0;
  if (s.size() == 1) return 1 + static_cast<std::size_t>(s[0]);
  const int i = s[0], j = s[1];
  if (i == j && n_cap_ < 2) return std::nullopt;
  // Pairs with column < j come first; with a cap of 1 each column lacks its diagonal.
  const std::size_t before = n_cap_ >= 2 ? static_cast<std::size_t>(j) * (j + 1) / 2
                                         : static_cast<std::size_t>(j) * (j - 1) / 2;
  return 1 + static_cast<std::size_t>(m_) + before + static_cast<std::size_t>(i);
}

std::size_t BathBasis::index(const std::vector<int>& c) const {
  const auto i = find(c);
  if (!i) throw ConfigError("bath configuration outside the restricted sector");
  return *i;
}

int BathBasis::occupation(std::size_t idx, int mode) const {
  const auto& c = configs_.at(idx);
  return static_cast<int>(std::count(c.begin(), c.end(), mode));
}

namespace {

struct Ket {
  double amp;
  std::vector<int> cfg;
};

// a_b on a sorted multiset; amp 0 if mode b is empty.
Ket lower(const Ket& k, int b) {
  auto it = std::find(k.cfg.begin(), k.cfg.end(), b);
  if (it == k.cfg.end()) return {0.0, {}};
  const auto n = std::count(k.cfg.begin(), k.cfg.end(), b);
  Ket r{k.amp * std::sqrt(static_cast<double>(n)), k.cfg};
  r.cfg.erase(r.cfg.begin() + (it - k.cfg.begin()));
  return r;
}

Ket raise(const Ket& k, int b) {
  const auto n = std::count(k.cfg.begin(), k.cfg.end(), b);
  Ket r{k.amp * std::sqrt(static_cast<double>(n + 1)), k.cfg};
  r.cfg.insert(std::upper_bound(r.cfg.begin(), r.cfg.end(), b), b);
  return r;
}

}  // namespace

SparseMatrix BathBasis::linear_form(const std::vector<double>& c) const {
  if (static_cast<int>(c.size()) != m_) throw ConfigError("bath coefficient count mismatch");
  std::vector<Triplet> t;
  for (std::size_t col = 0; col < size(); ++col) {
    const Ket k0{1.0, configs_[col]};
    for (int b = 0; b < m_; ++b) {
      if (c[b] == 0.0) continue;
      for (const Ket& r : {lower(k0, b), raise(k0, b)}) {
        if (r.amp == 0.0) continue;
        if (const auto row = find(r.cfg); row && occupation(*row, b) <= n_cap_)
          t.push_back({static_cast<std::int64_t>(*row), static_cast<std::int64_t>(col), c[b] * r.amp});
      }
    }
  }
  return SparseMatrix::from_triplets(size(), size(), std::move(t));
}

SparseMatrix BathBasis::quadratic_form(const Eigen::MatrixXd& k) const {
  if (k.rows() != m_ || k.cols() != m_) throw ConfigError("bath quadratic form size mismatch");
  const Eigen::MatrixXd ks = k + k.transpose();
  std::vector<Triplet> t;
  auto emit = [&](const Ket& r, std::size_t col) {
    if (r.amp == 0.0) return;
    const auto row = find(r.cfg);
    if (!row) return;
    for (int b : r.cfg)
      if (occupation(*row, b) > n_cap_) return;
    t.push_back({static_cast<std::int64_t>(*row), static_cast<std::int64_t>(col), r.amp});
  };
  const double trace = k.trace();
  for (std::size_t col = 0; col < size(); ++col) {
    const Ket k0{1.0, configs_[col]};
    emit({trace, k0.cfg}, col);  // commutator delta
    const auto& cfg = configs_[col];
    // a_b a_b' removes two photons.
    if (cfg.size() == 2) {
      const int i = cfg[0], j = cfg[1];
      const double amp = i == j ? std::sqrt(2.0) * k(i, i) : ks(i, j);
      emit({amp, {}}, col);
    }
    // a^dag_b a^dag_b' from the vacuum.
    if (cfg.empty() && sector_ >= 2) {
      for (int j = 0; j < m_; ++j)
        for (int i = 0; i <= j; ++i) {
          const double amp = i == j ? std::sqrt(2.0) * k(i, i) : ks(i, j);
          if (amp != 0.0) emit({amp, {i, j}}, col);
        }
    }
    // (K_bb' + K_b'b) a^dag_b a_b' conserves the photon number.
    std::vector<int> distinct = cfg;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (int bp : distinct) {
      const Ket lowered = lower(k0, bp);
      for (int b = 0; b < m_; ++b) {
        if (ks(b, bp) == 0.0) continue;
        Ket r = raise(lowered, b);
        r.amp *= ks(b, bp);
        emit(r, col);
      }
    }
  }
  return SparseMatrix::from_triplets(size(), size(), std::move(t));
}

SparseMatrix BathBasis::number_form(const std::vector<double>& w) const {
  if (static_cast<int>(w.size()) != m_) throw ConfigError("bath coefficient count mismatch");
  std::vector<cplx> d(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i)
    for (int b : configs_[i]) d[i] += w[b];
  return SparseMatrix::diagonal(d);
}

SampledBath sample_bath(const BathSpec& spec, const std::function<std::array<double, 2>(int)>& parent_polarization,
                        const UnitSystem& u) {
  spec.validate();
  SampledBath out;
  int label = 100;
  for (std::size_t w = 0; w < spec.windows.size(); ++w) {
    const auto& win = spec.windows[w];
    const auto pol = parent_polarization(win.parent_label);
    for (int k = 0; k < win.n_modes; ++k) {
      const double e = win.n_modes == 1 ? win.low_meV
                                        : win.low_meV + (win.high_meV - win.low_meV) * k / (win.n_modes - 1);
      FockMode m;
      m.label = label++;
      m.omega = energy_to_eff(e, u);
      m.n_max = spec.n_max_per_mode;
      m.lambda = spec.lambda_bath;
      m.polarization = pol;
      m.validate();
      out.modes.push_back(m);
      out.window_of_mode.push_back(static_cast<int>(w));
    }
  }
  out.basis = BathBasis(static_cast<int>(out.modes.size()), spec.sector, spec.n_max_per_mode);
  return out;
}

}  // namespace pdc
