#include "conecap/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "conecap/csv.hpp"

namespace conecap {

void write_field_csv(const DiscreteField& field, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "rho,theta,u\n";
  const Grid& g = field.grid;
  for (std::size_t i = 0; i < g.rt.size(); ++i) {
    for (std::size_t j = 0; j < g.theta.size(); ++j) {
      const double rho = g.mapping(g.rt[i], g.theta[j]).rho;
      f << format_double(rho) << "," << format_double(g.theta[j]) << ","
        << format_double(field.values[g.node(i, j)]) << "\n";
    }
  }
}

namespace {
constexpr char kMagic[4] = {'C', 'C', 'F', 'D'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_field_binary(const DiscreteField& field, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  const std::uint32_t ni = static_cast<std::uint32_t>(field.grid.rt.size());
  const std::uint32_t nj = static_cast<std::uint32_t>(field.grid.theta.size());
  f.write(kMagic, 4);
  f.write(reinterpret_cast<const char*>(&kVersion), 4);
  f.write(reinterpret_cast<const char*>(&ni), 4);
  f.write(reinterpret_cast<const char*>(&nj), 4);
  f.write(reinterpret_cast<const char*>(&field.p), 8);
  f.write(reinterpret_cast<const char*>(&field.achieved_eps), 8);
  f.write(reinterpret_cast<const char*>(field.grid.rt.data()), 8 * ni);
  f.write(reinterpret_cast<const char*>(field.grid.theta.data()), 8 * nj);
  f.write(reinterpret_cast<const char*>(field.values.data()),
          8 * static_cast<std::streamsize>(field.values.size()));
  if (!f) throw std::runtime_error("write failed for " + path);
}

FieldDump read_field_binary(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  char magic[4];
  std::uint32_t version = 0, ni = 0, nj = 0;
  f.read(magic, 4);
  f.read(reinterpret_cast<char*>(&version), 4);
  if (std::memcmp(magic, kMagic, 4) != 0 || version != kVersion)
    throw std::runtime_error("not a conecap field dump: " + path);
  f.read(reinterpret_cast<char*>(&ni), 4);
  f.read(reinterpret_cast<char*>(&nj), 4);
  FieldDump dump;
  f.read(reinterpret_cast<char*>(&dump.p), 8);
  f.read(reinterpret_cast<char*>(&dump.achieved_eps), 8);
  dump.rt.resize(ni);
  dump.theta.resize(nj);
  dump.values.resize(static_cast<std::size_t>(ni) * nj);
  f.read(reinterpret_cast<char*>(dump.rt.data()), 8 * ni);
  f.read(reinterpret_cast<char*>(dump.theta.data()), 8 * nj);
  f.read(reinterpret_cast<char*>(dump.values.data()),
         8 * static_cast<std::streamsize>(dump.values.size()));
  if (!f) throw std::runtime_error("truncated field dump: " + path);
  return dump;
}

}  // namespace conecap
