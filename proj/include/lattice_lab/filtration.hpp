#pragma once

// Finite filtrations E_1..E_N and builders for the families used throughout
// the library: coordinate truncations, pairwise averaging on c0, dyadic
// conditional expectations on [0,1], and random nested partitions.
//
// Operators are stored 1-based: level(n) is E_n for n = 1..horizon().

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string_view>
#include <string>
#include <utility>
#include <vector>

#include "lattice_lab/lattice.hpp"
#include "lattice_lab/operator.hpp"
#include "lattice_lab/rng.hpp"

namespace lattice_lab {

/// A list of operators over one space.  The filtration laws are not enforced at
/// construction; `validate` reports them so malformed inputs can be diagnosed.
class Filtration {
public:
  Filtration(SpaceRef space, std::vector<PosOperator> ops)
      : space_(std::move(space)), ops_(std::move(ops)) {
    if (!space_) throw lattice_error("Filtration: null space");
    if (ops_.empty()) throw lattice_error("Filtration: horizon must be >= 1");
    for (const auto& op : ops_) require_same_space(space_, op.space(), "Filtration");
  }

  const SpaceRef& space() const { return space_; }
  std::size_t horizon() const { return ops_.size(); }

  /// E_n, 1-based.
  const PosOperator& level(std::size_t n) const {
    if (n == 0 || n > ops_.size()) throw lattice_error("Filtration::level: index out of range");
    return ops_[n - 1];
  }

  const std::vector<PosOperator>& operators() const { return ops_; }

  /// E_1..E_n.
  Filtration prefix(std::size_t n) const {
    if (n == 0 || n > ops_.size()) throw lattice_error("Filtration::prefix: bad length");
    return Filtration(space_, std::vector<PosOperator>(ops_.begin(), ops_.begin() + static_cast<std::ptrdiff_t>(n)));
  }

  /// E_first..E_N, renumbered from 1.
  Filtration suffix(std::size_t first) const {
    if (first == 0 || first > ops_.size()) throw lattice_error("Filtration::suffix: bad start");
    return Filtration(space_, std::vector<PosOperator>(ops_.begin() + static_cast<std::ptrdiff_t>(first - 1), ops_.end()));
  }

private:
  SpaceRef space_;
  std::vector<PosOperator> ops_;
};

// ---------------------------------------------------------------------------
// Validation

struct LawCheck {
  std::string law;
  bool passed = true;
  /// Largest violation magnitude seen (0 when the law holds exactly).
  double worst = 0.0;
  /// 1-based (n, m) where the worst violation occurs; (n, n) for single-operator laws.
  std::optional<std::pair<std::size_t, std::size_t>> witness = std::nullopt;
};

struct ValidationReport {
  std::vector<LawCheck> laws;
  double tol = kDefaultTol;

  bool ok() const {
    return std::ranges::all_of(laws, [](const LawCheck& c) { return c.passed; });
  }

  const LawCheck* find(std::string_view law) const {
    for (const auto& c : laws)
      if (c.law == law) return &c;
    return nullptr;
  }
};

namespace detail {

inline void record(LawCheck& check, double magnitude, std::size_t n, std::size_t m, double tol) {
  if (magnitude > tol) check.passed = false;
  if (magnitude > check.worst) {
    check.worst = magnitude;
    if (magnitude > tol) check.witness = std::make_pair(n, m);
  }
}

}  // namespace detail

/// Checks positivity, idempotence, E_n E_m = E_{min(n,m)} and optionally
/// contractivity.  Failures are reported with the worst violating index pair.
inline ValidationReport validate(const Filtration& F, bool require_contractive = true,
                                 double tol = kDefaultTol) {
  ValidationReport report;
  report.tol = tol;
  LawCheck positivity{"positivity"};
  LawCheck idempotence{"idempotence"};
  LawCheck order{"order"};
  LawCheck contractivity{"contractivity"};

  const std::size_t N = F.horizon();
  for (std::size_t n = 1; n <= N; ++n) {
    const PosOperator& E = F.level(n);
    double most_negative = 0.0;
    for (double v : E.entries()) most_negative = std::max(most_negative, -v);
    detail::record(positivity, most_negative, n, n, tol);
    detail::record(idempotence, max_entry_diff(compose(E, E), E), n, n, tol);
    if (require_contractive)
      detail::record(contractivity, std::max(0.0, operator_norm(E) - 1.0), n, n, tol);
  }
  for (std::size_t n = 1; n <= N; ++n)
    for (std::size_t m = 1; m <= N; ++m) {
      if (n == m) continue;
      const PosOperator product = compose(F.level(n), F.level(m));
      detail::record(order, max_entry_diff(product, F.level(std::min(n, m))), n, m, tol);
    }

  report.laws = {positivity, idempotence, order};
  if (require_contractive) report.laws.push_back(contractivity);
  return report;
}

/// Finite-horizon density surrogate: E_N acts as the identity on every basis vector.
inline bool is_dense(const Filtration& F, double tol = kDefaultTol) {
  const PosOperator& last = F.level(F.horizon());
  double worst = 0.0;
  for (std::size_t i = 1; i <= F.space()->dim(); ++i) {
    const LatticeVector e = LatticeVector::unit(F.space(), i);
    worst = std::max(worst, distance(apply(last, e), e));
  }
  return worst <= tol;
}

// ---------------------------------------------------------------------------
// Builders

/// Conditional expectation onto functions constant on each block:
/// (Ex)|_B = (sum_{i in B} w_i x_i) / (sum_{i in B} w_i).  Blocks hold 0-based
/// coordinates and must partition {0..dim-1}.
inline PosOperator block_average(const SpaceRef& space, const std::vector<std::vector<std::size_t>>& blocks) {
  const std::size_t n = space->dim();
  std::vector<double> e(n * n, 0.0);
  std::vector<bool> seen(n, false);
  for (const auto& block : blocks) {
    double mass = 0.0;
    for (std::size_t i : block) {
      if (i >= n || seen[i]) throw lattice_error("block_average: blocks must partition the coordinates");
      seen[i] = true;
      mass += space->weight(i);
    }
    for (std::size_t i : block)
      for (std::size_t j : block) e[i * n + j] = space->weight(j) / mass;
  }
  if (!std::ranges::all_of(seen, [](bool b) { return b; }))
    throw lattice_error("block_average: blocks must cover every coordinate");
  return PosOperator(space, std::move(e));
}

/// E_n keeps the first n coordinates, n = 1..N.  Sup space of dim N.
inline Filtration build_truncation(std::size_t N) {
  SpaceRef space = make_space(LatticeSpace::sup(N));
  std::vector<PosOperator> ops;
  ops.reserve(N);
  for (std::size_t n = 1; n <= N; ++n) {
    std::vector<double> diag(N, 0.0);
    std::fill_n(diag.begin(), n, 1.0);
    ops.push_back(PosOperator::diagonal(space, diag));
  }
  return Filtration(space, std::move(ops));
}

/// Identity on the first `ones` coordinates, 2x2 averaging blocks on the rest.
inline PosOperator pairing_operator(const SpaceRef& space, std::size_t ones) {
  const std::size_t dim = space->dim();
  if (dim % 2 != 0 || ones % 2 != 0 || ones > dim)
    throw lattice_error("pairing_operator: needs even dim and an even count of ones");
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < ones; ++i) blocks.push_back({i});
  for (std::size_t i = ones; i < dim; i += 2) blocks.push_back({i, i + 1});
  return block_average(space, blocks);
}

/// Pairwise-averaging filtration on a sup space of dim 2K.  Stored level n
/// carries 2(n-1) leading ones, so level 1 averages every pair and level K+1
/// is the identity (horizon K+1).
inline Filtration build_pairing(std::size_t K) {
  if (K == 0) throw lattice_error("build_pairing: K must be >= 1");
  SpaceRef space = make_space(LatticeSpace::sup(2 * K));
  std::vector<PosOperator> ops;
  for (std::size_t n = 0; n <= K; ++n) ops.push_back(pairing_operator(space, 2 * n));
  return Filtration(space, std::move(ops));
}

/// Dyadic conditional expectations on 2^L equal cells of [0,1]; E_n averages
/// over blocks of 2^(L-n) consecutive cells, n = 1..L.
inline Filtration build_dyadic(std::size_t L) {
  if (L == 0 || L > 10) throw lattice_error("build_dyadic: L must be in [1, 10]");
  const std::size_t cells = std::size_t{1} << L;
  SpaceRef space = make_space(LatticeSpace::uniform_l1(cells));
  std::vector<PosOperator> ops;
  for (std::size_t n = 1; n <= L; ++n) {
    const std::size_t width = std::size_t{1} << (L - n);
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t start = 0; start < cells; start += width) {
      std::vector<std::size_t> block(width);
      std::iota(block.begin(), block.end(), start);
      blocks.push_back(std::move(block));
    }
    ops.push_back(block_average(space, blocks));
  }
  return Filtration(space, std::move(ops));
}

/// Random chain of nested partitions: level 1 is a single block and each
/// further level splits one block of size >= 2 in two, so level n has n blocks.
/// Weighted-L1 spaces get random cell measures summing to 1; sup spaces use
/// plain averaging.
inline Filtration build_random_nested(std::size_t dim, std::size_t depth, std::uint64_t seed,
                                      NormKind kind = NormKind::WeightedL1) {
  if (dim == 0) throw lattice_error("build_random_nested: dim must be >= 1");
  if (depth == 0 || depth > dim) throw lattice_error("build_random_nested: depth must be in [1, dim]");
  Rng rng(splitmix64(seed));

  SpaceRef space;
  if (kind == NormKind::Sup) {
    space = make_space(LatticeSpace::sup(dim));
  } else {
    std::vector<double> w(dim);
    for (double& v : w) v = uniform(rng, 0.5, 1.5);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= total;
    space = make_space(LatticeSpace::weighted_l1(std::move(w)));
  }

  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> blocks{order};

  std::vector<PosOperator> ops;
  ops.push_back(block_average(space, blocks));
  for (std::size_t level = 2; level <= depth; ++level) {
    std::vector<std::size_t> splittable;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if (blocks[b].size() >= 2) splittable.push_back(b);
    const std::size_t b = splittable[uniform_index(rng, 0, splittable.size() - 1)];
    const std::size_t cut = uniform_index(rng, 1, blocks[b].size() - 1);
    std::vector<std::size_t> tail(blocks[b].begin() + static_cast<std::ptrdiff_t>(cut), blocks[b].end());
    blocks[b].resize(cut);
    blocks.push_back(std::move(tail));
    ops.push_back(block_average(space, blocks));
  }
  return Filtration(space, std::move(ops));
}

}  // namespace lattice_lab
