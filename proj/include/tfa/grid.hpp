#pragma once

// Uniform cell-centred sampling of parallelepiped regions given in basis
// coordinates, sampled complex fields and midpoint quadrature.

#include <bit>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tfa/basis.hpp"
#include "tfa/errors.hpp"
#include "tfa/numeric.hpp"
#include "tfa/weight.hpp"

namespace tfa {

using cplx = std::complex<double>;

// Covers the lattice cells j + kappa(E) with lo[k] <= j_k <= hi[k], each cell
// sampled by m[k] points per axis at basis coordinates j_k + offset_k +
// (i + 1/2)/m[k].
class GridSpec {
 public:
  GridSpec() = default;
  GridSpec(OrderedBasis basis, std::vector<std::size_t> m, IntVec lo, IntVec hi,
           std::vector<double> offset = {})
      : basis_(std::move(basis)), m_(std::move(m)), lo_(std::move(lo)), hi_(std::move(hi)),
        offset_(std::move(offset)) {
    const auto d = basis_.dim();
    if (m_.size() == 1 && d > 1) m_.assign(d, m_.front());
    if (offset_.empty()) offset_.assign(d, 0.0);
    if (m_.size() != d || lo_.size() != d || hi_.size() != d || offset_.size() != d)
      throw InvalidArgument("grid spec arrays must match the basis dimension");
    for (std::size_t k = 0; k < d; ++k) {
      if (m_[k] == 0) throw InvalidArgument("samples per cell must be >= 1");
      if (hi_[k] < lo_[k]) throw InvalidArgument("empty cell range on axis " + std::to_string(k));
    }
    shape_.resize(d);
    for (std::size_t k = 0; k < d; ++k) shape_[k] = m_[k] * cells(k);
  }

  // Symmetric grid covering cells -n..n-1 on every axis.
  static GridSpec centered(OrderedBasis basis, std::size_t m, std::int64_t n) {
    const auto d = basis.dim();
    return GridSpec(std::move(basis), std::vector<std::size_t>(d, m), IntVec(d, -n), IntVec(d, n - 1));
  }

  const OrderedBasis& basis() const noexcept { return basis_; }
  std::size_t dim() const noexcept { return basis_.dim(); }
  const std::vector<std::size_t>& samples_per_cell() const noexcept { return m_; }
  const IntVec& lo() const noexcept { return lo_; }
  const IntVec& hi() const noexcept { return hi_; }
  const std::vector<double>& offset() const noexcept { return offset_; }
  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  std::size_t cells(std::size_t k) const noexcept { return std::size_t(hi_[k] - lo_[k] + 1); }
  std::vector<std::size_t> cell_shape() const {
    std::vector<std::size_t> s(dim());
    for (std::size_t k = 0; k < dim(); ++k) s[k] = cells(k);
    return s;
  }
  std::size_t size() const noexcept { return flat_size(shape_); }

  double coordinate(std::size_t k, std::size_t i) const noexcept {
    return double(lo_[k]) + offset_[k] + (double(i) + 0.5) / double(m_[k]);
  }
  double step(std::size_t k) const noexcept { return 1.0 / double(m_[k]); }
  // Lebesgue measure of one sample cell.
  double sample_volume() const noexcept {
    double v = basis_.volume();
    for (auto m : m_) v /= double(m);
    return v;
  }
  // Measure of one sample cell in basis coordinates.
  double coordinate_volume() const noexcept {
    double v = 1.0;
    for (auto m : m_) v /= double(m);
    return v;
  }

  Vec point(std::span<const std::size_t> idx) const {
    Vec c(static_cast<Eigen::Index>(dim()));
    for (std::size_t k = 0; k < dim(); ++k) c(Eigen::Index(k)) = coordinate(k, idx[k]);
    return basis_.point(c);
  }
  Vec point(std::size_t flat) const {
    std::vector<std::size_t> idx(dim());
    unflatten(flat, shape_, idx);
    return point(idx);
  }

  // All sample points, flat order.
  std::vector<Vec> points() const {
    std::vector<Vec> out(size());
    std::vector<std::size_t> idx(dim());
    for (std::size_t f = 0; f < size(); ++f) {
      unflatten(f, shape_, idx);
      out[f] = point(idx);
    }
    return out;
  }

  bool same_layout(const GridSpec& o) const {
    return dim() == o.dim() && m_ == o.m_ && lo_ == o.lo_ && hi_ == o.hi_ && offset_ == o.offset_ &&
           basis_.matrix() == o.basis_.matrix();
  }

 private:
  OrderedBasis basis_;
  std::vector<std::size_t> m_;
  IntVec lo_, hi_;
  std::vector<double> offset_;
  std::vector<std::size_t> shape_;
};

enum class Codomain { function, phase_space };

struct SampledField {
  GridSpec grid;
  std::vector<cplx> values;  // axis 0 fastest
  Codomain codomain = Codomain::function;
  std::map<std::string, std::string> metadata;

  SampledField() = default;
  SampledField(GridSpec g, std::vector<cplx> v, Codomain c = Codomain::function)
      : grid(std::move(g)), values(std::move(v)), codomain(c) {
    if (values.size() != grid.size())
      throw InvalidArgument("field value count does not match its grid");
  }

  static SampledField zeros(GridSpec g, Codomain c = Codomain::function) {
    const auto n = g.size();
    return SampledField(std::move(g), std::vector<cplx>(n), c);
  }

  std::size_t size() const noexcept { return values.size(); }
  const cplx& operator[](std::size_t i) const { return values[i]; }
  cplx& operator[](std::size_t i) { return values[i]; }

  bool all_finite() const {
    for (auto& v : values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  std::vector<double> magnitudes() const {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::abs(values[i]);
    return out;
  }
};

// Samples fn at every grid point.
inline SampledField sample(const GridSpec& grid, const std::function<cplx(const Vec&)>& fn,
                           Codomain c = Codomain::function) {
  SampledField f = SampledField::zeros(grid, c);
  std::vector<std::size_t> idx(grid.dim());
  for (std::size_t i = 0; i < f.size(); ++i) {
    unflatten(i, grid.shape(), idx);
    f.values[i] = fn(grid.point(idx));
  }
  return f;
}

// Calls fn(cell_flat, cell_index, sample_flat_indices) for each cell in
// axis-major cell order; sample indices are in axis-major order inside the
// cell.
inline void for_each_cell(
    const GridSpec& grid,
    const std::function<void(std::size_t, const IntVec&, const std::vector<std::size_t>&)>& fn) {
  const auto d = grid.dim();
  const auto cshape = grid.cell_shape();
  const auto& m = grid.samples_per_cell();
  const std::size_t ncells = flat_size(cshape);
  const std::size_t per_cell = flat_size(m);
  std::vector<std::size_t> cidx(d), sidx(d), gidx(d);
  std::vector<std::size_t> members(per_cell);
  IntVec j(d);
  for (std::size_t c = 0; c < ncells; ++c) {
    unflatten(c, cshape, cidx);
    for (std::size_t k = 0; k < d; ++k) j[k] = grid.lo()[k] + std::int64_t(cidx[k]);
    for (std::size_t s = 0; s < per_cell; ++s) {
      unflatten(s, m, sidx);
      for (std::size_t k = 0; k < d; ++k) gidx[k] = cidx[k] * m[k] + sidx[k];
      members[s] = flatten(gidx, grid.shape());
    }
    fn(c, j, members);
  }
}

// Midpoint rule: sum of values times |det T_E| / prod(m). Accumulated cell by
// cell (each cell compensated, then the cell totals compensated in cell order)
// so that summing restrict() quadratures in cell order reproduces it exactly.
inline cplx quadrature(const SampledField& f) {
  if (f.size() == 0) throw InvalidArgument("quadrature of an empty field");
  const double vol = f.grid.sample_volume();
  CompensatedSum re, im;
  for_each_cell(f.grid, [&](std::size_t, const IntVec&, const std::vector<std::size_t>& members) {
    CompensatedSum cre, cim;
    for (auto s : members) {
      cre.add(f.values[s].real());
      cim.add(f.values[s].imag());
    }
    re.add(cre.value() * vol);
    im.add(cim.value() * vol);
  });
  return {re.value(), im.value()};
}

// Exact sub-array over the single cell j + kappa(E).
inline SampledField restrict_to_cell(const SampledField& f, const IntVec& j) {
  const auto& g = f.grid;
  if (j.size() != g.dim()) throw InvalidArgument("cell index dimension mismatch");
  for (std::size_t k = 0; k < g.dim(); ++k)
    if (j[k] < g.lo()[k] || j[k] > g.hi()[k])
      throw RangeError("cell index outside the grid's cell range on axis " + std::to_string(k));
  GridSpec sub(g.basis(), g.samples_per_cell(), j, j, g.offset());
  SampledField out = SampledField::zeros(sub, f.codomain);
  out.metadata = f.metadata;
  std::vector<std::size_t> sidx(g.dim()), gidx(g.dim());
  for (std::size_t s = 0; s < out.size(); ++s) {
    unflatten(s, sub.shape(), sidx);
    for (std::size_t k = 0; k < g.dim(); ++k)
      gidx[k] = std::size_t(j[k] - g.lo()[k]) * g.samples_per_cell()[k] + sidx[k];
    out.values[s] = f.values[flatten(gidx, g.shape())];
  }
  return out;
}

// F_omega = F * omega at the sample points.
inline SampledField weigh(const SampledField& f, const Weight& omega) {
  if (omega.dim() != f.grid.dim()) throw InvalidArgument("weight and field dimensions differ");
  SampledField out = f;
  if (omega.is_constant()) return out;
  std::vector<std::size_t> idx(f.grid.dim());
  for (std::size_t i = 0; i < f.size(); ++i) {
    unflatten(i, f.grid.shape(), idx);
    const Vec x = f.grid.point(idx);
    out.values[i] *= omega(std::span<const double>(x.data(), std::size_t(x.size())));
  }
  return out;
}

inline nlohmann::json grid_to_json(const GridSpec& g) {
  return {{"basis", g.basis()},
          {"samples_per_cell", g.samples_per_cell()},
          {"lo", g.lo()},
          {"hi", g.hi()},
          {"offset", g.offset()}};
}

inline GridSpec grid_from_json(const nlohmann::json& j) {
  return GridSpec(j.at("basis").get<OrderedBasis>(),
                  j.at("samples_per_cell").get<std::vector<std::size_t>>(),
                  j.at("lo").get<IntVec>(), j.at("hi").get<IntVec>(),
                  j.value("offset", std::vector<double>{}));
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// CSV: one row per sample with ambient coordinates, then re, im.
inline void write_csv(std::ostream& os, const SampledField& f) {
  const auto d = f.grid.dim();
  for (std::size_t k = 0; k < d; ++k) os << "x" << k << ",";
  os << "re,im\n";
  std::vector<std::size_t> idx(d);
  for (std::size_t i = 0; i < f.size(); ++i) {
    unflatten(i, f.grid.shape(), idx);
    const Vec x = f.grid.point(idx);
    for (std::size_t k = 0; k < d; ++k) os << format_double(x(Eigen::Index(k))) << ",";
    os << format_double(f.values[i].real()) << "," << format_double(f.values[i].imag()) << "\n";
  }
}

// Binary: "TFAF", little-endian u64 header length, JSON header, then
// little-endian f64 (re, im) pairs in flat order.
inline void write_binary(std::ostream& os, const SampledField& f) {
  nlohmann::json h = grid_to_json(f.grid);
  h["codomain"] = f.codomain == Codomain::function ? "function" : "phase_space";
  h["metadata"] = f.metadata;
  const std::string header = h.dump();
  auto put_u64 = [&](std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
  };
  os.write("TFAF", 4);
  put_u64(header.size());
  os.write(header.data(), std::streamsize(header.size()));
  for (auto& v : f.values)
    for (double x : {v.real(), v.imag()}) put_u64(std::bit_cast<std::uint64_t>(x));
}

inline SampledField read_binary(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "TFAF", 4) != 0) throw InvalidArgument("not a field file");
  auto get_u64 = [&]() {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw InvalidArgument("truncated field file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    return v;
  };
  const auto len = get_u64();
  std::string header(len, '\0');
  is.read(header.data(), std::streamsize(len));
  const auto h = nlohmann::json::parse(header);
  SampledField f = SampledField::zeros(grid_from_json(h),
                                       h.value("codomain", "function") == "function"
                                           ? Codomain::function
                                           : Codomain::phase_space);
  f.metadata = h.value("metadata", std::map<std::string, std::string>{});
  for (auto& v : f.values) {
    const double re = std::bit_cast<double>(get_u64());
    const double im = std::bit_cast<double>(get_u64());
    v = {re, im};
  }
  return f;
}

}  // namespace tfa
