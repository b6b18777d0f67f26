#include <cstdint>
#include <cstring>
#include <fstream>

#include "pdcqed/errors.hpp"
#include "pdcqed/matter.hpp"

namespace pdc {

namespace {

constexpr char kMagic[8] = {'P', 'D', 'C', 'M', 'A', 'T', 'T', 'R'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& f, const T& v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& f) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!f) throw ConfigError("matter file truncated");
  return v;
}

void put_matrix(std::ofstream& f, const CMatrix& m) {
  put<std::uint64_t>(f, m.rows());
  put<std::uint64_t>(f, m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      put(f, m(i, j).real());
      put(f, m(i, j).imag());
    }
}

CMatrix get_matrix(std::ifstream& f) {
  const auto r = get<std::uint64_t>(f), c = get<std::uint64_t>(f);
  if (r > (1u << 26) || c > (1u << 16)) throw ConfigError("matter file has implausible matrix size");
  CMatrix m(r, c);
  for (std::uint64_t i = 0; i < r; ++i)
    for (std::uint64_t j = 0; j < c; ++j) {
      const double re = get<double>(f), im = get<double>(f);
      m(i, j) = {re, im};
    }
  return m;
}

}  // namespace

void save_matter(const std::string& path, const MatterModel& m) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write matter file " + path);
  const auto& b = m.basis;
  f.write(kMagic, sizeof kMagic);
  put(f, kVersion);
  put<std::int32_t>(f, b.grid.nx);
  put<std::int32_t>(f, b.grid.ny);
  put(f, b.grid.dx);
  put(f, b.grid.dy);
  put<std::int32_t>(f, b.grid.stencil_order);
  put(f, m.potential.omega0);
  put(f, m.potential.d);
  put(f, m.potential.v0);
  put<std::uint64_t>(f, b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    put(f, b.energies[i]);
    put<std::int32_t>(f, b.l_labels[i]);
    put<std::int32_t>(f, b.j_labels[i]);
    put(f, b.lz[i]);
  }
  put_matrix(f, b.h_el);
  put_matrix(f, m.transitions.x_dip);
  put_matrix(f, m.transitions.y_dip);
  put_matrix(f, m.transitions.px);
  put_matrix(f, m.transitions.py);
  // Stored state-major so each wavefunction grid is contiguous and row-major.
  put_matrix(f, b.states.transpose());
  if (!f) throw ConfigError("failed writing matter file " + path);
}

MatterModel load_matter(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open matter file " + path);
  char magic[8];
  f.read(magic, sizeof magic);
  if (!f || std::memcmp(magic, kMagic, sizeof magic) != 0) throw ConfigError(path + " is not a matter file");
  const auto version = get<std::uint32_t>(f);
  if (version != kVersion) throw ConfigError("unsupported matter file version " + std::to_string(version));
  MatterModel m;
  auto& b = m.basis;
  b.grid.nx = get<std::int32_t>(f);
  b.grid.ny = get<std::int32_t>(f);
  b.grid.dx = get<double>(f);
  b.grid.dy = get<double>(f);
  b.grid.stencil_order = get<std::int32_t>(f);
  b.grid.validate();
  m.potential.omega0 = get<double>(f);
  m.potential.d = get<double>(f);
  m.potential.v0 = get<double>(f);
  const auto n = get<std::uint64_t>(f);
  if (n == 0 || n > 4096) throw ConfigError("matter file has implausible state count");
  for (std::uint64_t i = 0; i < n; ++i) {
    b.energies.push_back(get<double>(f));
    b.l_labels.push_back(get<std::int32_t>(f));
    b.j_labels.push_back(get<std::int32_t>(f));
    b.lz.push_back(get<double>(f));
  }
  b.h_el = get_matrix(f);
  m.transitions.x_dip = get_matrix(f);
  m.transitions.y_dip = get_matrix(f);
  m.transitions.px = get_matrix(f);
  m.transitions.py = get_matrix(f);
  b.states = get_matrix(f).transpose();
  const auto ns = static_cast<Eigen::Index>(n);
  for (const CMatrix* mat : {&b.h_el, &m.transitions.x_dip, &m.transitions.y_dip, &m.transitions.px,
                             &m.transitions.py})
    if (mat->rows() != ns || mat->cols() != ns) throw ConfigError("matter file matrices inconsistent");
  if (b.states.cols() != ns || static_cast<std::size_t>(b.states.rows()) != b.grid.size())
    throw ConfigError("matter file wavefunctions inconsistent with grid");
  m.ops = make_matter_operators(b, m.transitions);
  return m;
}

}  // namespace pdc
