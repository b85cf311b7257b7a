#pragma once

// Finite-dimensional coordinate-ordered vector lattices.
//
// Two norms are supported: the sup norm (truncations of c0 / l-infinity) and a
// weighted L1 norm where each coordinate is a cell of positive measure (the
// piecewise-constant model of L1[0,1]).  Order and lattice operations are
// coordinate-wise in both cases.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lattice_lab {

/// Comparison tolerance for norm-valued equalities.  Order comparisons are exact.
inline constexpr double kDefaultTol = 1e-9;

class lattice_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class NormKind { Sup, WeightedL1 };

inline const char* to_string(NormKind kind) {
  return kind == NormKind::Sup ? "sup" : "l1";
}

class LatticeSpace {
public:
  static LatticeSpace sup(std::size_t dim) {
    if (dim == 0) throw lattice_error("LatticeSpace: dim must be >= 1");
    return LatticeSpace(dim, NormKind::Sup, {});
  }

  static LatticeSpace weighted_l1(std::vector<double> weights) {
    if (weights.empty()) throw lattice_error("LatticeSpace: dim must be >= 1");
    for (double w : weights) {
      if (!(w > 0.0) || !std::isfinite(w))
        throw lattice_error("LatticeSpace: weights must be finite and strictly positive");
    }
    const std::size_t dim = weights.size();
    return LatticeSpace(dim, NormKind::WeightedL1, std::move(weights));
  }

  /// `cells` equal cells of measure 1/cells.
  static LatticeSpace uniform_l1(std::size_t cells) {
    if (cells == 0) throw lattice_error("LatticeSpace: dim must be >= 1");
    return weighted_l1(std::vector<double>(cells, 1.0 / static_cast<double>(cells)));
  }

  std::size_t dim() const { return dim_; }
  NormKind norm_kind() const { return kind_; }

  /// Cell measures; empty for sup spaces.
  std::span<const double> weights() const { return weights_; }

  /// Weight of coordinate i.  Sup spaces report 1 so uniform averaging falls out.
  double weight(std::size_t i) const {
    return kind_ == NormKind::WeightedL1 ? weights_[i] : 1.0;
  }

  double norm(std::span<const double> coords) const {
    double acc = 0.0;
    if (kind_ == NormKind::Sup) {
      for (double c : coords) acc = std::max(acc, std::abs(c));
    } else {
      for (std::size_t i = 0; i < coords.size(); ++i) acc += weights_[i] * std::abs(coords[i]);
    }
    return acc;
  }

  friend bool operator==(const LatticeSpace& a, const LatticeSpace& b) {
    if (a.dim_ != b.dim_ || a.kind_ != b.kind_) return false;
    return a.kind_ == NormKind::Sup || a.weights_ == b.weights_;
  }

private:
  LatticeSpace(std::size_t dim, NormKind kind, std::vector<double> weights)
      : dim_(dim), kind_(kind), weights_(std::move(weights)) {}

  std::size_t dim_;
  NormKind kind_;
  std::vector<double> weights_;
};

/// Shared immutable handle; vectors, operators and sequences over the same
/// space hold the same handle.
using SpaceRef = std::shared_ptr<const LatticeSpace>;

inline SpaceRef make_space(LatticeSpace space) {
  return std::make_shared<const LatticeSpace>(std::move(space));
}

inline bool same_space(const SpaceRef& a, const SpaceRef& b) {
  return a == b || (a && b && *a == *b);
}

inline void require_same_space(const SpaceRef& a, const SpaceRef& b, const char* what) {
  if (!same_space(a, b)) throw lattice_error(std::string(what) + ": space mismatch");
}

class LatticeVector {
public:
  LatticeVector(SpaceRef space, std::vector<double> coords)
      : space_(std::move(space)), coords_(std::move(coords)) {
    if (!space_) throw lattice_error("LatticeVector: null space");
    if (coords_.size() != space_->dim())
      throw lattice_error("LatticeVector: expected " + std::to_string(space_->dim()) +
                          " coordinates, got " + std::to_string(coords_.size()));
  }

  static LatticeVector zero(SpaceRef space) {
    const std::size_t dim = space->dim();
    return LatticeVector(std::move(space), std::vector<double>(dim, 0.0));
  }

  /// Unit vector e_i, 1-based.
  static LatticeVector unit(SpaceRef space, std::size_t i) {
    if (i == 0 || i > space->dim()) throw lattice_error("LatticeVector::unit: index out of range");
    std::vector<double> c(space->dim(), 0.0);
    c[i - 1] = 1.0;
    return LatticeVector(std::move(space), std::move(c));
  }

  const SpaceRef& space() const { return space_; }
  std::size_t dim() const { return coords_.size(); }
  std::span<const double> coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  double norm() const { return space_->norm(coords_); }

  friend bool operator==(const LatticeVector& a, const LatticeVector& b) {
    return same_space(a.space_, b.space_) && a.coords_ == b.coords_;
  }

private:
  SpaceRef space_;
  std::vector<double> coords_;
};

namespace detail {

template <class BinaryOp>
LatticeVector zip(const LatticeVector& x, const LatticeVector& y, const char* what, BinaryOp op) {
  require_same_space(x.space(), y.space(), what);
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(x[i], y[i]);
  return LatticeVector(x.space(), std::move(out));
}

template <class UnaryOp>
LatticeVector map(const LatticeVector& x, UnaryOp op) {
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(x[i]);
  return LatticeVector(x.space(), std::move(out));
}

}  // namespace detail

inline LatticeVector join(const LatticeVector& x, const LatticeVector& y) {
  return detail::zip(x, y, "join", [](double a, double b) { return std::max(a, b); });
}

inline LatticeVector meet(const LatticeVector& x, const LatticeVector& y) {
  return detail::zip(x, y, "meet", [](double a, double b) { return std::min(a, b); });
}

inline LatticeVector abs(const LatticeVector& x) {
  return detail::map(x, [](double a) { return std::abs(a); });
}

inline LatticeVector negate(const LatticeVector& x) {
  return detail::map(x, [](double a) { return -a; });
}

inline LatticeVector operator+(const LatticeVector& x, const LatticeVector& y) {
  return detail::zip(x, y, "add", std::plus<>{});
}

inline LatticeVector operator-(const LatticeVector& x, const LatticeVector& y) {
  return detail::zip(x, y, "subtract", std::minus<>{});
}

inline LatticeVector operator*(double c, const LatticeVector& x) {
  return detail::map(x, [c](double a) { return c * a; });
}

/// Coordinate-wise order, exact.
inline bool leq(const LatticeVector& x, const LatticeVector& y) {
  require_same_space(x.space(), y.space(), "leq");
  for (std::size_t i = 0; i < x.dim(); ++i)
    if (!(x[i] <= y[i])) return false;
  return true;
}

inline double norm(const LatticeVector& x) { return x.norm(); }

/// ||x - y||
inline double distance(const LatticeVector& x, const LatticeVector& y) { return norm(x - y); }

}  // namespace lattice_lab
