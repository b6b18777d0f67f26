#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "pdcqed/errors.hpp"
#include "pdcqed/propagator.hpp"

namespace pdc {

namespace {
constexpr char kMagic[8] = {'P', 'D', 'C', 'C', 'K', 'P', 'T', '1'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_checkpoint(const std::string& path, const CoupledState& s, const std::string& descriptor) {
  // Write to a temporary name first so an interrupted write never clobbers the previous checkpoint.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw ConfigError("cannot write checkpoint " + tmp);
    f.write(kMagic, sizeof kMagic);
    f.write(reinterpret_cast<const char*>(&kVersion), sizeof kVersion);
    const std::uint64_t len = descriptor.size();
    f.write(reinterpret_cast<const char*>(&len), sizeof len);
    f.write(descriptor.data(), static_cast<std::streamsize>(len));
    f.write(reinterpret_cast<const char*>(&s.time), sizeof s.time);
    const std::uint64_t n = s.amplitudes.size();
    f.write(reinterpret_cast<const char*>(&n), sizeof n);
    f.write(reinterpret_cast<const char*>(s.amplitudes.data()), static_cast<std::streamsize>(n * sizeof(cplx)));
    if (!f) throw ConfigError("failed writing checkpoint " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw ConfigError("cannot move checkpoint into place at " + path);
}

CoupledState read_checkpoint(const std::string& path, const std::string& expected) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open checkpoint " + path);
  char magic[8];
  f.read(magic, sizeof magic);
  if (!f || std::memcmp(magic, kMagic, sizeof magic) != 0) throw ConfigError(path + " is not a checkpoint");
  std::uint32_t version = 0;
  f.read(reinterpret_cast<char*>(&version), sizeof version);
  if (version != kVersion) throw ConfigError("unsupported checkpoint version " + std::to_string(version));
  std::uint64_t len = 0;
  f.read(reinterpret_cast<char*>(&len), sizeof len);
  if (!f || len > 4096) throw ConfigError("corrupt checkpoint header");
  std::string descriptor(len, '\0');
  f.read(descriptor.data(), static_cast<std::streamsize>(len));
  if (!expected.empty() && descriptor != expected)
    throw ConfigError("checkpoint basis '" + descriptor + "' does not match '" + expected + "'");
  CoupledState s;
  f.read(reinterpret_cast<char*>(&s.time), sizeof s.time);
  std::uint64_t n = 0;
  f.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!f || n > (std::uint64_t{1} << 34)) throw ConfigError("corrupt checkpoint size");
  s.amplitudes.resize(static_cast<Eigen::Index>(n));
  f.read(reinterpret_cast<char*>(s.amplitudes.data()), static_cast<std::streamsize>(n * sizeof(cplx)));
  if (!f) throw ConfigError("checkpoint truncated");
  return s;
}

}  // namespace pdc
