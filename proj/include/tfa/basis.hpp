#pragma once

// Ordered bases of R^d, their 2*pi-dual bases, the lattices they generate and
// the half-open fundamental cells that tile R^d.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "tfa/errors.hpp"
#include "tfa/numeric.hpp"

namespace tfa {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IntVec = std::vector<std::int64_t>;

inline constexpr double degeneracy_threshold = 1e-12;

// An ordered basis {e_1, ..., e_d}; the vectors are the columns of T_E.
class OrderedBasis {
 public:
  OrderedBasis() = default;

  explicit OrderedBasis(Mat columns) : t_(std::move(columns)) {
    if (t_.rows() == 0 || t_.rows() != t_.cols())
      throw InvalidArgument("basis matrix must be square and non-empty");
    double scale = 0.0;
    for (Eigen::Index k = 0; k < t_.cols(); ++k) scale = std::max(scale, t_.col(k).norm());
    det_ = t_.determinant();
    if (!(std::abs(det_) > degeneracy_threshold * std::pow(scale, double(dim()))) ||
        !std::isfinite(det_)) {
      std::ostringstream os;
      os << "degenerate basis: |det T_E| = " << std::abs(det_)
         << " <= 1e-12 * scale^d with scale = " << scale;
      throw SingularityError(os.str());
    }
    inv_ = t_.inverse();
  }

  static OrderedBasis from_vectors(const std::vector<std::vector<double>>& vectors) {
    if (vectors.empty()) throw InvalidArgument("basis needs at least one vector");
    const auto d = static_cast<Eigen::Index>(vectors.size());
    Mat t(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
      if (static_cast<Eigen::Index>(vectors[k].size()) != d)
        throw InvalidArgument("basis vector " + std::to_string(k) + " has wrong length");
      for (Eigen::Index i = 0; i < d; ++i) t(i, k) = vectors[k][i];
    }
    return OrderedBasis(std::move(t));
  }

  static OrderedBasis standard(std::size_t d) {
    return OrderedBasis(Mat::Identity(Eigen::Index(d), Eigen::Index(d)));
  }
  static OrderedBasis scaled_standard(std::size_t d, double s) {
    return OrderedBasis(s * Mat::Identity(Eigen::Index(d), Eigen::Index(d)));
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(t_.cols()); }
  const Mat& matrix() const noexcept { return t_; }
  const Mat& inverse() const noexcept { return inv_; }
  Vec vector(std::size_t k) const { return t_.col(Eigen::Index(k)); }
  double det() const noexcept { return det_; }
  // Lebesgue measure of kappa(E).
  double volume() const noexcept { return std::abs(det_); }

  Vec coordinates(const Vec& x) const { return inv_ * x; }
  Vec point(const Vec& coords) const { return t_ * coords; }

  OrderedBasis scaled(double s) const { return OrderedBasis(s * t_); }

  // True when every column of T_E is a multiple of a standard unit vector on
  // the diagonal, so coordinates decouple axis by axis.
  bool is_diagonal(double tol = 0.0) const {
    for (Eigen::Index j = 0; j < t_.cols(); ++j)
      for (Eigen::Index i = 0; i < t_.rows(); ++i)
        if (i != j && std::abs(t_(i, j)) > tol) return false;
    return true;
  }

  std::vector<std::vector<double>> vectors() const {
    std::vector<std::vector<double>> out(dim(), std::vector<double>(dim()));
    for (std::size_t k = 0; k < dim(); ++k)
      for (std::size_t i = 0; i < dim(); ++i) out[k][i] = t_(Eigen::Index(i), Eigen::Index(k));
    return out;
  }

 private:
  Mat t_;
  Mat inv_;
  double det_ = 0.0;
};

inline bool approx_equal(const OrderedBasis& a, const OrderedBasis& b, double rel_tol) {
  if (a.dim() != b.dim()) return false;
  const double scale = std::max(a.matrix().norm(), b.matrix().norm());
  return (a.matrix() - b.matrix()).norm() <= rel_tol * scale;
}

// E' with <e_j, e'_k> = 2 pi delta_jk, i.e. T_{E'} = 2 pi (T_E^{-1})^t.
inline OrderedBasis dual_basis(const OrderedBasis& e) {
  return OrderedBasis(two_pi * e.inverse().transpose());
}

// Lattice Lambda_E = { n_1 e_1 + ... + n_d e_d : n in Z^d }.
class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(OrderedBasis basis) : basis_(std::move(basis)) {}

  const OrderedBasis& basis() const noexcept { return basis_; }
  std::size_t dim() const noexcept { return basis_.dim(); }

  Vec point(const IntVec& n) const {
    Vec c(static_cast<Eigen::Index>(n.size()));
    for (std::size_t k = 0; k < n.size(); ++k) c(Eigen::Index(k)) = double(n[k]);
    return basis_.point(c);
  }

  // Integer coordinates of a generated point, or nullopt when x is not on the
  // lattice within rel_tol.
  std::optional<IntVec> index_of(const Vec& x, double rel_tol = 1e-9) const {
    const Vec c = basis_.coordinates(x);
    IntVec n(dim());
    for (std::size_t k = 0; k < dim(); ++k) {
      const double r = std::round(c(Eigen::Index(k)));
      if (std::abs(c(Eigen::Index(k)) - r) > rel_tol * std::max(1.0, std::abs(r)))
        return std::nullopt;
      n[k] = static_cast<std::int64_t>(r);
    }
    return n;
  }

  bool contains(const Vec& x, double rel_tol = 1e-9) const {
    return index_of(x, rel_tol).has_value();
  }

 private:
  OrderedBasis basis_;
};

// Lambda_{E/n} = (1/n) Lambda_E, which contains Lambda_E with index n^d.
inline Lattice refine_lattice(const Lattice& lattice, std::int64_t n) {
  if (n < 1) throw InvalidArgument("refinement factor must be >= 1");
  if (n == 1) return lattice;
  return Lattice(lattice.basis().scaled(1.0 / double(n)));
}

// Lattice point j (as integer coordinates) with x in j + kappa(E), kappa(E)
// half-open [0,1)^d in basis coordinates.
inline IntVec cell_index(const OrderedBasis& e, const Vec& x) {
  const Vec c = e.coordinates(x);
  IntVec j(e.dim());
  for (std::size_t k = 0; k < e.dim(); ++k) {
    double v = c(Eigen::Index(k));
    const double r = std::round(v);
    // Snap round-off from T_E^{-1} so lattice faces land in the upper cell.
    if (std::abs(v - r) <= 1e-12 * std::max(1.0, std::abs(r))) v = r;
    j[k] = static_cast<std::int64_t>(std::floor(v));
  }
  return j;
}

// E_1 x E_2: block-diagonal basis of R^{2d} with E_1 in V_1 = {(x,0)} first.
inline OrderedBasis product_basis(const OrderedBasis& e1, const OrderedBasis& e2) {
  const auto d1 = Eigen::Index(e1.dim()), d2 = Eigen::Index(e2.dim());
  Mat t = Mat::Zero(d1 + d2, d1 + d2);
  t.topLeftCorner(d1, d1) = e1.matrix();
  t.bottomRightCorner(d2, d2) = e2.matrix();
  return OrderedBasis(std::move(t));
}

// Finds a permutation sigma with <e1_j, e2_sigma(j)> = 2 pi delta, or nullopt.
// Exhaustive for d <= 6, greedy on the Gram matrix above that.
inline std::optional<std::vector<std::size_t>> permuted_dual_match(
    const OrderedBasis& e1, const OrderedBasis& e2, double tol = 1e-9) {
  if (e1.dim() != e2.dim()) return std::nullopt;
  const std::size_t d = e1.dim();
  const Mat gram = e1.matrix().transpose() * e2.matrix();
  auto fits = [&](const std::vector<std::size_t>& sigma) {
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) {
        const double want = (sigma[j] == k) ? two_pi : 0.0;
        if (std::abs(gram(Eigen::Index(j), Eigen::Index(k)) - want) > tol * two_pi) return false;
      }
    return true;
  };
  std::vector<std::size_t> sigma(d);
  std::iota(sigma.begin(), sigma.end(), 0);
  if (d <= 6) {
    do {
      if (fits(sigma)) return sigma;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return std::nullopt;
  }
  std::vector<bool> used(d, false);
  for (std::size_t j = 0; j < d; ++j) {
    std::size_t best = d;
    double err = 1e300;
    for (std::size_t k = 0; k < d; ++k) {
      if (used[k]) continue;
      const double e = std::abs(gram(Eigen::Index(j), Eigen::Index(k)) - two_pi);
      if (e < err) err = e, best = k;
    }
    sigma[j] = best;
    used[best] = true;
  }
  return fits(sigma) ? std::optional(sigma) : std::nullopt;
}

// A basis of phase space R^{2d} whose first d vectors span V_1 and whose
// remaining vectors span V_2, with (E_1, E_2) permuted dual.
class PhaseSplitBasis {
 public:
  const OrderedBasis& full() const noexcept { return full_; }
  const OrderedBasis& config_basis() const noexcept { return e1_; }     // E_1 = pi_1(E_0)
  const OrderedBasis& frequency_basis() const noexcept { return e2_; }  // E_2 = pi_2(E \ E_0)
  std::size_t dim() const noexcept { return e1_.dim(); }
  // sigma with e1_j paired to e2_sigma(j); recorded, not interpreted.
  const std::vector<std::size_t>& permutation() const noexcept { return perm_; }
  bool strongly_split() const noexcept { return true; }

  // E' = E_1' x E_2'.
  OrderedBasis dual() const { return product_basis(dual_basis(e1_), dual_basis(e2_)); }

  friend PhaseSplitBasis phase_split(const OrderedBasis& e1, const OrderedBasis& e2);

 private:
  OrderedBasis full_, e1_, e2_;
  std::vector<std::size_t> perm_;
};

inline PhaseSplitBasis phase_split(const OrderedBasis& e1, const OrderedBasis& e2) {
  if (e1.dim() != e2.dim())
    throw ValidationError("phase split bases must have equal dimension");
  auto sigma = permuted_dual_match(e1, e2);
  if (!sigma) {
    std::ostringstream os;
    os << "(E1, E2) are not permuted dual bases; Gram matrix <e1_j, e2_k> =\n"
       << (e1.matrix().transpose() * e2.matrix());
    throw ValidationError(os.str());
  }
  PhaseSplitBasis p;
  p.full_ = product_basis(e1, e2);
  p.e1_ = e1;
  p.e2_ = e2;
  p.perm_ = *sigma;
  return p;
}

// Residual of projecting the columns of `part` onto V_1 (first half) or V_2.
inline double subspace_residual(const OrderedBasis& full, std::size_t first, std::size_t count,
                                bool config_half) {
  const std::size_t d = full.dim() / 2;
  double worst = 0.0;
  for (std::size_t k = first; k < first + count; ++k) {
    const Vec v = full.vector(k);
    const double off = config_half ? v.tail(Eigen::Index(d)).norm() : v.head(Eigen::Index(d)).norm();
    worst = std::max(worst, off / std::max(1.0, v.norm()));
  }
  return worst;
}

inline void to_json(nlohmann::json& j, const OrderedBasis& e) {
  j = nlohmann::json{{"columns", e.vectors()}};
}
inline void from_json(const nlohmann::json& j, OrderedBasis& e) {
  if (!j.contains("columns")) throw InvalidArgument("basis object requires \"columns\"");
  e = OrderedBasis::from_vectors(j.at("columns").get<std::vector<std::vector<double>>>());
}

}  // namespace tfa
