#include "pdcqed/output.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "pdcqed/errors.hpp"

namespace pdc {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string cell(const Sample& s) { return s ? num(*s) : std::string(); }

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  f.exceptions(std::ios::badbit);
  return f;
}

}  // namespace

std::vector<std::string> series_csv_header() {
  std::vector<std::string> h{"time_ps", "n1", "n2", "n3"};
  for (int a = 1; a <= 3; ++a)
    for (int k = 1; k <= 3; ++k) h.push_back("P" + std::to_string(k) + "_" + std::to_string(a));
  for (const char* c : {"Q1", "Q2", "Q3", "g2_12", "g2_13", "g2_23", "gamma_1", "gamma_2", "gamma_3", "gamma_matter",
                        "H1_meV", "H2_meV", "H3_meV", "method"})
    h.emplace_back(c);
  return h;
}

void write_series_csv(std::ostream& os, const std::vector<const ObservableSeries*>& series, const UnitSystem& u,
                      bool header) {
  if (header) {
    const auto h = series_csv_header();
    for (std::size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << h[i];
    os << '\n';
  }
  for (const auto* s : series) {
    for (std::size_t t = 0; t < s->times.size(); ++t) {
      std::vector<std::string> row{num(eff_to_ps(s->times[t], u))};
      for (int a = 1; a <= 3; ++a) row.push_back(s->has_mode(a) ? num(s->mode(a).n[t]) : "");
      for (int a = 1; a <= 3; ++a)
        for (int k = 0; k < 3; ++k) row.push_back(s->has_mode(a) ? cell(s->mode(a).P[k][t]) : "");
      for (int a = 1; a <= 3; ++a) row.push_back(s->has_mode(a) ? cell(s->mode(a).Q[t]) : "");
      for (auto [a, b] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}}) {
        auto it = s->g2.find({a, b});
        row.push_back(it != s->g2.end() ? cell(it->second[t]) : "");
      }
      for (int a = 1; a <= 3; ++a) row.push_back(s->has_mode(a) ? cell(s->mode(a).gamma[t]) : "");
      row.push_back(t < s->matter_purity.size() ? cell(s->matter_purity[t]) : "");
      for (int a = 1; a <= 3; ++a) row.push_back(s->has_mode(a) ? num(energy_from_eff(s->mode(a).H[t], u)) : "");
      row.push_back(s->method);
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << '\n';
    }
  }
}

void write_series_csv(const std::string& path, const std::vector<const ObservableSeries*>& series,
                      const UnitSystem& u) {
  auto f = open_out(path);
  write_series_csv(f, series, u, true);
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, SweepParameter p) {
  os << to_string(p) << ",ok,n2_max,t_n2_max_ps,q2_min,q2_min_raw,t_q2_min_ps,first_n2_peak_ps,eta,runtime_s,error\n";
  for (const auto& r : rows) {
    os << num(r.value) << ',' << (r.ok ? 1 : 0) << ',';
    if (r.ok) {
      const auto& m = r.metrics;
      os << num(m.n2_max) << ',' << num(m.t_n2_max_ps) << ',' << num(m.q2_min) << ',' << num(m.q2_min_raw) << ','
         << num(m.t_q2_min_ps) << ',' << num(m.first_peak_ps) << ',' << (m.eta ? num(*m.eta) : "");
    } else {
      os << ",,,,,,";
    }
    std::string err = r.error;
    for (char& c : err)
      if (c == ',' || c == '\n') c = ';';
    os << ',' << num(r.runtime_s) << ',' << err << '\n';
  }
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows, SweepParameter p) {
  auto f = open_out(path);
  write_sweep_csv(f, rows, p);
}

void write_coupling_csv(std::ostream& os, const std::vector<CouplingRow>& rows) {
  const std::size_t ng = rows.empty() ? 0 : rows.front().g.size();
  os << "cavity_length_um,lambda,lambda_tabulated";
  for (std::size_t a = 0; a < ng; ++a) os << ",g" << a + 1;
  for (std::size_t a = 0; a < ng; ++a)
    for (std::size_t b = a + 1; b < ng; ++b) os << ",g" << a + 1 << "g" << b + 1;
  os << '\n';
  for (const auto& r : rows) {
    os << (r.cavity_length_um ? num(*r.cavity_length_um) : "") << ',' << num(r.lambda) << ','
       << (r.lambda_tabulated ? num(*r.lambda_tabulated) : "");
    for (double g : r.g) os << ',' << num(g);
    for (double g : r.products) os << ',' << num(g);
    os << '\n';
  }
}

void write_coupling_csv(const std::string& path, const std::vector<CouplingRow>& rows) {
  auto f = open_out(path);
  write_coupling_csv(f, rows);
}

void write_json(const std::string& path, const nlohmann::json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

}  // namespace pdc
