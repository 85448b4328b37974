#include "fraclap/field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fraclap/error.hpp"
#include "fraclap/io.hpp"

namespace fraclap {

static_assert(std::endian::native == std::endian::little, "field I/O assumes a little-endian host");

Field::Field(Grid grid, int components, std::vector<double> values)
    : grid_(grid), components_(components), values_(std::move(values)) {
  require(components >= 1, "field must have at least one component");
  require(values_.size() == grid_.node_count() * static_cast<std::size_t>(components),
          "field value count does not match node count x components");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw NumericalError("non-finite field value at node " + std::to_string(i / components_));
    }
  }
}

Field::Field(Grid grid, int components)
    : Field(grid, components, std::vector<double>(grid.node_count() * std::max(components, 1))) {}

double Field::magnitude(std::size_t node) const {
  if (components_ == 1) return std::abs(values_[node]);
  double s = 0.0;
  for (int c = 0; c < components_; ++c) {
    const double v = values_[node * components_ + c];
    s += v * v;
  }
  return std::sqrt(s);
}

Field Field::component(int c) const {
  require(c >= 0 && c < components_, "component index out of range");
  std::vector<double> v(node_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (*this)(i, c);
  return Field(grid_, 1, std::move(v));
}

Field stack_components(std::span<const Field> parts) {
  require(!parts.empty(), "cannot stack zero fields");
  const Grid& grid = parts.front().grid();
  const int n = static_cast<int>(parts.size());
  std::vector<double> v(grid.node_count() * n);
  for (int c = 0; c < n; ++c) {
    require(parts[c].grid() == grid && parts[c].components() == 1, "stacked parts must be scalar fields on one grid");
    for (std::size_t i = 0; i < grid.node_count(); ++i) v[i * n + c] = parts[c](i);
  }
  return Field(grid, n, std::move(v));
}

FieldNorms field_norms(const Field& f, double q) {
  require(q >= 1.0, "q-norm requires q >= 1");
  FieldNorms out;
  double sum = 0.0;
  for (double v : f.values()) {
    const double a = std::abs(v);
    out.sup_norm = std::max(out.sup_norm, a);
    sum += std::pow(a, q);
  }
  const int n = f.grid().dim();
  out.lq_norm = std::pow(f.grid().spacing(), n / q) * std::pow(sum, 1.0 / q);
  return out;
}

double gl_energy(const Field& u) {
  double sum = 0.0;
  for (std::size_t i = 0; i < u.node_count(); ++i) {
    const double m = u.magnitude(i);
    const double defect = m * m - 1.0;
    if (std::abs(defect) <= 1e-15) continue;
    sum += defect * defect;
  }
  return sum * u.grid().cell_volume();
}

TailDiagnostic tail_diagnostics(const Field& u, double alpha) {
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0, 2)");
  const Grid& g = u.grid();
  const double exponent = g.dim() + alpha;
  TailDiagnostic d;
  double s = 0.0;
  for (std::size_t i = 0; i < u.node_count(); ++i) {
    s += u.magnitude(i) / (1.0 + std::pow(g.radius(i), exponent));
  }
  d.l_alpha_integral = s * g.cell_volume();
  d.gl_energy = gl_energy(u);
  return d;
}

namespace {

constexpr char kMagic[8] = {'F', 'R', 'A', 'C', 'F', 'L', 'D', '1'};

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ValidationError("field file truncated");
  return v;
}

}  // namespace

void write_field(std::ostream& out, const Field& f) {
  const Grid& g = f.grid();
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.points_per_axis()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.components()));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(g.topology()));
  put<double>(out, g.half_extent());
  auto v = f.values();
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

Field read_field(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(magic, magic + 8, kMagic)) throw ValidationError("not a field file (bad magic)");
  const auto dim = get<std::uint32_t>(in);
  const auto n = get<std::uint32_t>(in);
  const auto comps = get<std::uint32_t>(in);
  const auto topo = get<std::uint8_t>(in);
  const auto half_extent = get<double>(in);
  require(topo <= 1, "field file has unknown topology code");
  require(comps >= 1 && comps <= 64, "field file has implausible component count");
  Grid grid(static_cast<int>(dim), half_extent, static_cast<int>(n), static_cast<Topology>(topo));
  std::vector<double> values(grid.node_count() * comps);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!in) throw ValidationError("field file truncated");
  if (in.peek() != std::char_traits<char>::eof()) throw ValidationError("trailing bytes after field data");
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("field file contains non-finite values");
  }
  return Field(grid, static_cast<int>(comps), std::move(values));
}

void write_field_file(const std::string& path, const Field& f) {
  std::ostringstream buf(std::ios::binary);
  write_field(buf, f);
  write_file_atomic(path, buf.str());
}

Field read_field_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open field file " + path);
  return read_field(in);
}

}  // namespace fraclap
