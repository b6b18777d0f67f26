#include "pdcqed/observables.hpp"

#include <cmath>

#include "pdcqed/errors.hpp"

namespace pdc {

bool ObservableSeries::has_mode(int label) const {
  for (const auto& m : modes)
    if (m.label == label) return true;
  return false;
}

const ModeSeries& ObservableSeries::mode(int label) const {
  for (const auto& m : modes)
    if (m.label == label) return m;
  throw ConfigError("series has no mode " + std::to_string(label));
}

ModeSeries& ObservableSeries::mode(int label) {
  return const_cast<ModeSeries&>(static_cast<const ObservableSeries&>(*this).mode(label));
}

std::vector<double> fock_distribution(const CVector& psi, const CoupledBasis& basis, int label) {
  const std::size_t f = basis.mode_factor(label);
  std::vector<double> p(basis.factor_dim(f), 0.0);
  for (Eigen::Index i = 0; i < psi.size(); ++i) p[basis.component(i, f)] += std::norm(psi(i));
  return p;
}

double mode_occupation(const CVector& psi, const CoupledBasis& basis, int label) {
  const auto p = fock_distribution(psi, basis, label);
  double n = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) n += k * p[k];
  return n;
}

double fock_population(const CVector& psi, const CoupledBasis& basis, int label, int k) {
  const auto p = fock_distribution(psi, basis, label);
  if (k < 0 || k >= static_cast<int>(p.size())) throw ConfigError("Fock index beyond the truncation");
  return p[k];
}

namespace {

Sample mandel_from(const std::vector<double>& p, double floor) {
  double n = 0.0, n2 = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    n += k * p[k];
    n2 += static_cast<double>(k) * k * p[k];
  }
  if (n < floor) return std::nullopt;
  return (n2 - n - n * n) / n;
}

}  // namespace

Sample mandel_q(const CVector& psi, const CoupledBasis& basis, int label, double floor) {
  return mandel_from(fock_distribution(psi, basis, label), floor);
}

Sample g2_cross(const CVector& psi, const CoupledBasis& basis, int a, int b, double floor) {
  const std::size_t fa = basis.mode_factor(a), fb = basis.mode_factor(b);
  double na = 0.0, nb = 0.0, nab = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const double w = std::norm(psi(i));
    const double ka = static_cast<double>(basis.component(i, fa)), kb = static_cast<double>(basis.component(i, fb));
    na += w * ka;
    nb += w * kb;
    nab += w * ka * kb;
  }
  if (na < floor || nb < floor) return std::nullopt;
  return nab / (na * nb);
}

double purity_factor(const CVector& psi, const CoupledBasis& basis, std::size_t f) {
  const std::size_t d = basis.factor_dim(f);
  const std::size_t inner = basis.stride(f);
  const std::size_t outer = basis.dimension() / (d * inner);
  CMatrix rho = CMatrix::Zero(d, d);
  for (std::size_t o = 0; o < outer; ++o) {
    const auto block = Eigen::Map<const CMatrix>(psi.data() + o * d * inner, inner, d);
    rho.noalias() += block.transpose() * block.conjugate();
  }
  return rho.cwiseAbs2().sum();
}

double purity(const CVector& psi, const CoupledBasis& basis, const std::string& subsystem) {
  if (subsystem == "matter") return purity_factor(psi, basis, 0);
  int label = 0;
  try {
    label = std::stoi(subsystem);
  } catch (const std::exception&) {
    throw ConfigError("unknown subsystem '" + subsystem + "'");
  }
  return purity_factor(psi, basis, basis.mode_factor(label));
}

double photon_energy(const CVector& psi, const CoupledBasis& basis, int label) {
  return basis.mode(label).omega * (mode_occupation(psi, basis, label) + 0.5);
}

ObservableRecorder::ObservableRecorder(const CoupledBasis& basis, std::string method, std::vector<int> labels,
                                       bool purities)
    : basis_(basis), labels_(std::move(labels)), purities_(purities) {
  if (labels_.empty())
    for (const auto& m : basis.modes())
      if (m.label >= 1 && m.label <= 3) labels_.push_back(m.label);
  series_.method = std::move(method);
  for (int l : labels_) {
    factors_.push_back(basis.mode_factor(l));
    ModeSeries ms;
    ms.label = l;
    ms.omega = basis.mode(l).omega;
    series_.modes.push_back(ms);
  }
  for (std::size_t a = 0; a < labels_.size(); ++a)
    for (std::size_t b = a + 1; b < labels_.size(); ++b)
      series_.g2[{std::min(labels_[a], labels_[b]), std::max(labels_[a], labels_[b])}] = {};
}

void ObservableRecorder::operator()(const CoupledState& s) {
  const auto& psi = s.amplitudes;
  const std::size_t nm = labels_.size();
  std::vector<std::vector<double>> p(nm);
  for (std::size_t a = 0; a < nm; ++a) p[a].assign(basis_.factor_dim(factors_[a]), 0.0);
  std::vector<double> nn(nm * nm, 0.0);
  std::vector<std::size_t> k(nm);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const double w = std::norm(psi(i));
    if (w == 0.0) continue;
    for (std::size_t a = 0; a < nm; ++a) {
      k[a] = basis_.component(i, factors_[a]);
      p[a][k[a]] += w;
    }
    for (std::size_t a = 0; a < nm; ++a)
      for (std::size_t b = a + 1; b < nm; ++b) nn[a * nm + b] += w * static_cast<double>(k[a] * k[b]);
  }
  series_.times.push_back(s.time);
  std::vector<double> n(nm, 0.0);
  for (std::size_t a = 0; a < nm; ++a) {
    auto& ms = series_.modes[a];
    for (std::size_t q = 0; q < p[a].size(); ++q) n[a] += q * p[a][q];
    ms.n.push_back(n[a]);
    ms.H.push_back(ms.omega * (n[a] + 0.5));
    for (int q = 1; q <= 3; ++q)
      ms.P[q - 1].push_back(q < static_cast<int>(p[a].size()) ? Sample(p[a][q]) : Sample(0.0));
    ms.Q.push_back(mandel_from(p[a], kOccupationFloor));
    ms.gamma.push_back(purities_ ? Sample(purity_factor(psi, basis_, factors_[a])) : std::nullopt);
  }
  for (std::size_t a = 0; a < nm; ++a)
    for (std::size_t b = a + 1; b < nm; ++b) {
      const auto key = std::make_pair(std::min(labels_[a], labels_[b]), std::max(labels_[a], labels_[b]));
      Sample g;
      if (n[a] >= kOccupationFloor && n[b] >= kOccupationFloor) g = nn[a * nm + b] / (n[a] * n[b]);
      series_.g2[key].push_back(g);
    }
  series_.matter_purity.push_back(purities_ ? Sample(purity_factor(psi, basis_, 0)) : std::nullopt);
}

double efficiency_eta(const ObservableSeries& s, int pump, int signal) {
  if (!s.has_mode(pump)) throw ConfigError("efficiency needs the pump mode in the series");
  const auto& hp = s.mode(pump).H;
  const auto& hs = s.mode(signal).H;
  if (hp.empty() || hs.empty()) throw ConfigError("efficiency of an empty series");
  if (hp.front() == 0.0) throw ConfigError("pump mode carries no energy at t0");
  double best = hs.front();
  for (double h : hs) best = std::max(best, h);
  return best / hp.front();
}

SeriesExtrema series_extrema(const ObservableSeries& s, int label, double t_from, double t_to) {
  const auto& m = s.mode(label);
  SeriesExtrema e;
  e.q_min_raw = std::numeric_limits<double>::quiet_NaN();
  bool any_n = false;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    const double t = s.times[i];
    if (t < t_from || t > t_to) continue;
    if (!any_n) {
      e.n_max = m.n[i];
      e.t_n_max = t;
      e.t_q_min = t;
      any_n = true;
    } else if (m.n[i] > e.n_max) {
      e.n_max = m.n[i];
      e.t_n_max = t;
    }
    if (i < m.Q.size() && m.Q[i]) {
      if (std::isnan(e.q_min_raw) || *m.Q[i] < e.q_min_raw) {
        e.q_min_raw = *m.Q[i];
        e.t_q_min = t;
      }
    }
  }
  if (!any_n) throw ConfigError("no samples inside the extrema window");
  e.q_min = std::isnan(e.q_min_raw) ? 0.0 : std::min(0.0, e.q_min_raw);
  return e;
}

double first_major_peak_time(const ObservableSeries& s, int label, double fraction, double t_from, double t_to) {
  const auto& n = s.mode(label).n;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < s.times.size(); ++i)
    if (s.times[i] >= t_from && s.times[i] <= t_to) idx.push_back(i);
  if (idx.empty()) throw ConfigError("no samples inside the peak window");
  double top = n[idx[0]];
  for (auto i : idx) top = std::max(top, n[i]);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const double v = n[idx[j]];
    if (v < fraction * top) continue;
    const bool left = j == 0 || n[idx[j - 1]] <= v;
    const bool right = j + 1 == idx.size() || n[idx[j + 1]] < v;
    if (left && right) return s.times[idx[j]];
  }
  return s.times[idx.back()];
}

}  // namespace pdc
