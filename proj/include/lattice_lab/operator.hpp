#pragma once

// Dense linear operators on a LatticeSpace, with the structural checks used
// to validate filtrations: positivity, idempotence, contractivity and
// band-projection detection.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lattice_lab/lattice.hpp"

namespace lattice_lab {

/// Square matrix acting on a space, (Tx)_i = sum_j T_ij x_j.  Row-major storage.
/// Positivity is a checked property, never assumed.
class PosOperator {
public:
  PosOperator(SpaceRef space, std::vector<double> row_major)
      : space_(std::move(space)), entries_(std::move(row_major)) {
    if (!space_) throw lattice_error("PosOperator: null space");
    const std::size_t n = space_->dim();
    if (entries_.size() != n * n)
      throw lattice_error("PosOperator: expected " + std::to_string(n) + "x" + std::to_string(n) +
                          " matrix");
  }

  static PosOperator from_rows(SpaceRef space, const std::vector<std::vector<double>>& rows) {
    const std::size_t n = space->dim();
    if (rows.size() != n) throw lattice_error("PosOperator: row count does not match space dim");
    std::vector<double> flat;
    flat.reserve(n * n);
    for (const auto& row : rows) {
      if (row.size() != n) throw lattice_error("PosOperator: matrix is not square");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return PosOperator(std::move(space), std::move(flat));
  }

  static PosOperator identity(SpaceRef space) {
    const std::size_t n = space->dim();
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
    return PosOperator(std::move(space), std::move(e));
  }

  static PosOperator zero(SpaceRef space) {
    const std::size_t n = space->dim();
    return PosOperator(std::move(space), std::vector<double>(n * n, 0.0));
  }

  static PosOperator diagonal(SpaceRef space, const std::vector<double>& diag) {
    const std::size_t n = space->dim();
    if (diag.size() != n) throw lattice_error("PosOperator::diagonal: size mismatch");
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = diag[i];
    return PosOperator(std::move(space), std::move(e));
  }

  const SpaceRef& space() const { return space_; }
  std::size_t dim() const { return space_->dim(); }

  /// 0-based entry access.
  double operator()(std::size_t row, std::size_t col) const { return entries_[row * dim() + col]; }

  std::span<const double> entries() const { return entries_; }

  std::vector<std::vector<double>> rows() const {
    const std::size_t n = dim();
    std::vector<std::vector<double>> out(n);
    for (std::size_t i = 0; i < n; ++i)
      out[i].assign(entries_.begin() + static_cast<std::ptrdiff_t>(i * n),
                    entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
    return out;
  }

  friend bool operator==(const PosOperator& a, const PosOperator& b) {
    return same_space(a.space_, b.space_) && a.entries_ == b.entries_;
  }

private:
  SpaceRef space_;
  std::vector<double> entries_;
};

inline LatticeVector apply(const PosOperator& T, const LatticeVector& x) {
  require_same_space(T.space(), x.space(), "apply");
  const std::size_t n = T.dim();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += T(i, j) * x[j];
    out[i] = acc;
  }
  return LatticeVector(x.space(), std::move(out));
}

/// Matrix product T*S (apply S first).
inline PosOperator compose(const PosOperator& T, const PosOperator& S) {
  require_same_space(T.space(), S.space(), "compose");
  const std::size_t n = T.dim();
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double t = T(i, k);
      if (t == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += t * S(k, j);
    }
  return PosOperator(T.space(), std::move(out));
}

/// Largest absolute entrywise difference.
inline double max_entry_diff(const PosOperator& a, const PosOperator& b) {
  require_same_space(a.space(), b.space(), "max_entry_diff");
  double worst = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) worst = std::max(worst, std::abs(ea[k] - eb[k]));
  return worst;
}

/// Under the coordinate order, positivity is entrywise nonnegativity.
inline bool is_positive(const PosOperator& T, double tol = kDefaultTol) {
  return std::ranges::all_of(T.entries(), [tol](double v) { return v >= -tol; });
}

inline bool is_projection(const PosOperator& T, double tol = kDefaultTol) {
  return max_entry_diff(compose(T, T), T) <= tol;
}

/// Induced operator norm.
///   sup:          max_i sum_j |T_ij|                 (max absolute row sum)
///   weighted L1:  max_j (sum_i w_i |T_ij|) / w_j     (max weighted column sum)
inline double operator_norm(const PosOperator& T) {
  const std::size_t n = T.dim();
  const LatticeSpace& space = *T.space();
  double best = 0.0;
  if (space.norm_kind() == NormKind::Sup) {
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += std::abs(T(i, j));
      best = std::max(best, row);
    }
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < n; ++i) col += space.weight(i) * std::abs(T(i, j));
      best = std::max(best, col / space.weight(j));
    }
  }
  return best;
}

inline bool is_contractive(const PosOperator& T, double tol = kDefaultTol) {
  return operator_norm(T) <= 1.0 + tol;
}

/// Bands of a coordinate lattice are coordinate subsets, so band projections
/// are exactly the 0/1 diagonal masks.
inline bool is_band_projection(const PosOperator& T, double tol = kDefaultTol) {
  const std::size_t n = T.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v = T(i, j);
      if (i != j) {
        if (std::abs(v) > tol) return false;
      } else if (std::abs(v) > tol && std::abs(v - 1.0) > tol) {
        return false;
      }
    }
  return true;
}

inline bool is_identity(const PosOperator& T, double tol = kDefaultTol) {
  return max_entry_diff(T, PosOperator::identity(T.space())) <= tol;
}

/// |x| ^ |y| = 0, measured in norm.
inline bool disjoint(const LatticeVector& x, const LatticeVector& y, double tol = kDefaultTol) {
  return norm(meet(abs(x), abs(y))) <= tol;
}

}  // namespace lattice_lab
