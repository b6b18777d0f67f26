#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdcqed/basis.hpp"
#include "pdcqed/propagator.hpp"

namespace pdc {

// An undefined sample (occupation below the floor, or not available for the method).
using Sample = std::optional<double>;

inline constexpr double kOccupationFloor = 1e-6;

struct ModeSeries {
  int label = 0;
  double omega = 0.0;
  std::vector<double> n;
  std::vector<double> H;
  std::array<std::vector<Sample>, 3> P;  // Fock populations k = 1, 2, 3
  std::vector<Sample> Q;
  std::vector<Sample> gamma;  // purity of the mode
};

struct ObservableSeries {
  std::string method;
  std::vector<double> times;  // eff. units
  std::vector<ModeSeries> modes;
  std::map<std::pair<int, int>, std::vector<Sample>> g2;
  std::vector<Sample> matter_purity;

  bool has_mode(int label) const;
  const ModeSeries& mode(int label) const;
  ModeSeries& mode(int label);
};

// Marginal photon-number distribution of a mode.
std::vector<double> fock_distribution(const CVector& psi, const CoupledBasis& basis, int label);
double mode_occupation(const CVector& psi, const CoupledBasis& basis, int label);
double fock_population(const CVector& psi, const CoupledBasis& basis, int label, int k);
Sample mandel_q(const CVector& psi, const CoupledBasis& basis, int label, double floor = kOccupationFloor);
Sample g2_cross(const CVector& psi, const CoupledBasis& basis, int a, int b, double floor = kOccupationFloor);
// Tr(rho_f^2) for one tensor factor (0 = matter, 1.. = modes) by index-sliced partial trace.
double purity_factor(const CVector& psi, const CoupledBasis& basis, std::size_t factor);
// subsystem: "matter" or a mode label such as "2".
double purity(const CVector& psi, const CoupledBasis& basis, const std::string& subsystem);
double photon_energy(const CVector& psi, const CoupledBasis& basis, int label);

// Records all observables of the listed modes (default: every mode with label 1..3).
class ObservableRecorder {
 public:
  ObservableRecorder(const CoupledBasis& basis, std::string method, std::vector<int> labels = {},
                     bool purities = true);
  void operator()(const CoupledState& s);
  const ObservableSeries& series() const { return series_; }
  ObservableSeries take() { return std::move(series_); }

 private:
  const CoupledBasis& basis_;
  std::vector<int> labels_;
  std::vector<std::size_t> factors_;
  bool purities_;
  ObservableSeries series_;
};

// max_t H_signal(t) / H_pump(t0)
double efficiency_eta(const ObservableSeries& s, int pump = 1, int signal = 2);

struct SeriesExtrema {
  double n_max = 0.0;
  double t_n_max = 0.0;
  double q_min_raw = 0.0;  // over defined samples; NaN if none
  double t_q_min = 0.0;
  double q_min = 0.0;      // min(0, q_min_raw): zero when the field never turns sub-Poissonian
};

SeriesExtrema series_extrema(const ObservableSeries& s, int label = 2, double t_from = 0.0,
                             double t_to = std::numeric_limits<double>::infinity());

// Time of the first local maximum of n_label that reaches `fraction` of the
// window maximum; small early ripples are skipped.
double first_major_peak_time(const ObservableSeries& s, int label = 2, double fraction = 0.5, double t_from = 0.0,
                             double t_to = std::numeric_limits<double>::infinity());

}  // namespace pdc
