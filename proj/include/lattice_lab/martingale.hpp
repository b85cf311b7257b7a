#pragma once

// Martingale-like sequences over a finite filtration and their classification.
//
// Three classes are distinguished, each a finite-horizon surrogate of the
// infinite definition:
//   martingale     E_n x_m = x_n for all m >= n
//   E-martingale   E_m x_{m+1} = x_m for all m >= l, for some witness l < N
//   X-martingale   d_n = max_{n <= m <= N} ||E_n x_m - x_n|| tends to 0,
//                  judged on the last window of the defect profile
// The first two are algebraic and use an absolute tolerance; the third is a
// limit statement and gets its own relative threshold and an INCONCLUSIVE
// outcome.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lattice_lab/filtration.hpp"
#include "lattice_lab/lattice.hpp"
#include "lattice_lab/operator.hpp"

namespace lattice_lab {

class MartingaleSeq {
public:
  MartingaleSeq(SpaceRef space, std::vector<LatticeVector> vectors)
      : space_(std::move(space)), vectors_(std::move(vectors)) {
    if (!space_) throw lattice_error("MartingaleSeq: null space");
    if (vectors_.empty()) throw lattice_error("MartingaleSeq: sequence must be nonempty");
    for (const auto& v : vectors_) require_same_space(space_, v.space(), "MartingaleSeq");
  }

  explicit MartingaleSeq(std::vector<LatticeVector> vectors) : vectors_(std::move(vectors)) {
    if (vectors_.empty()) throw lattice_error("MartingaleSeq: sequence must be nonempty");
    space_ = vectors_.front().space();
    for (const auto& v : vectors_) require_same_space(space_, v.space(), "MartingaleSeq");
  }

  const SpaceRef& space() const { return space_; }
  std::size_t size() const { return vectors_.size(); }

  /// x_n, 1-based.
  const LatticeVector& at(std::size_t n) const {
    if (n == 0 || n > vectors_.size()) throw lattice_error("MartingaleSeq::at: index out of range");
    return vectors_[n - 1];
  }

  const std::vector<LatticeVector>& vectors() const { return vectors_; }

  friend bool operator==(const MartingaleSeq& a, const MartingaleSeq& b) {
    return same_space(a.space_, b.space_) && a.vectors_ == b.vectors_;
  }

private:
  SpaceRef space_;
  std::vector<LatticeVector> vectors_;
};

enum class XVerdict { XMartingale, NotX, Inconclusive };

inline const char* to_string(XVerdict v) {
  switch (v) {
    case XVerdict::XMartingale: return "X_MARTINGALE";
    case XVerdict::NotX: return "NOT_X";
    case XVerdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

struct ClassifyOptions {
  /// Absolute tolerance for the algebraic classes.
  double tol = kDefaultTol;
  /// X-martingale threshold; defaults to 0.05 * max(1, ||A||).
  std::optional<double> eps_x;
  /// Fraction of the horizon forming the tail window.
  double window_fraction = 0.25;
};

struct ClassificationReport {
  std::size_t horizon = 0;
  bool is_martingale = false;
  std::optional<std::size_t> e_witness;
  /// ||E_m x_{m+1} - x_m|| for m = 1..N-1.
  std::vector<double> one_step_defects;
  /// d_1..d_N.  d_N only sees m = N, so it is ||E_N x_N - x_N||.
  std::vector<double> x_defects;
  XVerdict x_verdict = XVerdict::Inconclusive;
  double seq_norm = 0.0;
  double tol = kDefaultTol;
  double eps_x = 0.0;
  double window_fraction = 0.25;
  /// First index n* of the tail window.
  std::size_t window_start = 1;
};

// ---------------------------------------------------------------------------
// Basic sequence operations

/// sup_n ||x_n||
inline double seq_norm(const MartingaleSeq& A) {
  double best = 0.0;
  for (const auto& x : A.vectors()) best = std::max(best, norm(x));
  return best;
}

/// ||A - B|| in l-infinity(X).
inline double seq_distance(const MartingaleSeq& A, const MartingaleSeq& B) {
  if (A.size() != B.size()) throw lattice_error("seq_distance: length mismatch");
  double best = 0.0;
  for (std::size_t n = 1; n <= A.size(); ++n) best = std::max(best, distance(A.at(n), B.at(n)));
  return best;
}

inline MartingaleSeq abs_seq(const MartingaleSeq& A) {
  std::vector<LatticeVector> out;
  out.reserve(A.size());
  for (const auto& x : A.vectors()) out.push_back(abs(x));
  return MartingaleSeq(A.space(), std::move(out));
}

inline MartingaleSeq seq_add(const MartingaleSeq& A, const MartingaleSeq& B) {
  if (A.size() != B.size()) throw lattice_error("seq_add: length mismatch");
  std::vector<LatticeVector> out;
  for (std::size_t n = 1; n <= A.size(); ++n) out.push_back(A.at(n) + B.at(n));
  return MartingaleSeq(A.space(), std::move(out));
}

inline MartingaleSeq seq_scale(double c, const MartingaleSeq& A) {
  std::vector<LatticeVector> out;
  for (const auto& x : A.vectors()) out.push_back(c * x);
  return MartingaleSeq(A.space(), std::move(out));
}

namespace detail {

inline void require_horizon(const MartingaleSeq& A, const Filtration& F, const char* what) {
  require_same_space(A.space(), F.space(), what);
  if (A.size() != F.horizon())
    throw lattice_error(std::string(what) + ": sequence length " + std::to_string(A.size()) +
                        " does not match filtration horizon " + std::to_string(F.horizon()));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Classification

/// ||E_n x_m - x_n|| for a single pair.
inline double pair_defect(const MartingaleSeq& A, const Filtration& F, std::size_t n, std::size_t m) {
  return distance(apply(F.level(n), A.at(m)), A.at(n));
}

/// max over m >= n of ||E_n x_m - x_n||; zero for martingales.
inline double max_martingale_defect(const MartingaleSeq& A, const Filtration& F) {
  detail::require_horizon(A, F, "max_martingale_defect");
  double worst = 0.0;
  for (std::size_t n = 1; n <= A.size(); ++n)
    for (std::size_t m = n; m <= A.size(); ++m) worst = std::max(worst, pair_defect(A, F, n, m));
  return worst;
}

inline bool classify_martingale(const MartingaleSeq& A, const Filtration& F, double tol = kDefaultTol) {
  return max_martingale_defect(A, F) <= tol;
}

/// ||E_m x_{m+1} - x_m|| for m = 1..N-1.
inline std::vector<double> one_step_defects(const MartingaleSeq& A, const Filtration& F) {
  detail::require_horizon(A, F, "one_step_defects");
  std::vector<double> out;
  for (std::size_t m = 1; m < A.size(); ++m) out.push_back(pair_defect(A, F, m, m + 1));
  return out;
}

/// Minimal witness l < N such that E_m x_{m+1} = x_m for every l <= m < N.
/// A witness at N would be vacuous, so none is returned when the one-step law
/// fails at N-1.  With a horizon of 1 there is no one-step law to test; the
/// witness is 1 exactly when the sequence is a martingale.
inline std::optional<std::size_t> classify_E(const MartingaleSeq& A, const Filtration& F,
                                             double tol = kDefaultTol) {
  const std::size_t N = A.size();
  if (N == 1) {
    if (classify_martingale(A, F, tol)) return 1;
    return std::nullopt;
  }
  const std::vector<double> steps = one_step_defects(A, F);
  std::size_t l = N;
  while (l > 1 && steps[l - 2] <= tol) --l;
  if (l >= N) return std::nullopt;
  return l;
}

/// d_n = max_{n <= m <= N} ||E_n x_m - x_n||, n = 1..N.
inline std::vector<double> x_defect_profile(const MartingaleSeq& A, const Filtration& F) {
  detail::require_horizon(A, F, "x_defect_profile");
  std::vector<double> d(A.size(), 0.0);
  for (std::size_t n = 1; n <= A.size(); ++n)
    for (std::size_t m = n; m <= A.size(); ++m) d[n - 1] = std::max(d[n - 1], pair_defect(A, F, n, m));
  return d;
}

/// n* = ceil((1 - window_fraction) * N), clamped to [1, N].
inline std::size_t window_start(std::size_t horizon, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw lattice_error("window_fraction must be in (0, 1]");
  const double raw = std::ceil((1.0 - window_fraction) * static_cast<double>(horizon) - 1e-12);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(raw, 1.0)), 1, horizon);
}

inline double default_eps_x(double sequence_norm) { return 0.05 * std::max(1.0, sequence_norm); }

/// Tail-window rule on a defect profile.
///   X_MARTINGALE  max over the window <= eps and the profile never rises by
///                 more than eps inside it
///   NOT_X         every defect in the window exceeds 10 eps; the terminal
///                 entry d_N is left out here since it only compares x_N with
///                 E_N x_N and vanishes whenever E_N = I
///   INCONCLUSIVE  otherwise
inline XVerdict x_verdict_from_profile(const std::vector<double>& d, double eps, double window_fraction) {
  const std::size_t N = d.size();
  const std::size_t start = window_start(N, window_fraction);
  double worst = 0.0;
  bool settles = true;
  for (std::size_t n = start; n <= N; ++n) {
    worst = std::max(worst, d[n - 1]);
    if (n < N && d[n] > d[n - 1] + eps) settles = false;
  }
  if (worst <= eps && settles) return XVerdict::XMartingale;

  const std::size_t last = start < N ? N - 1 : N;
  double least = d[start - 1];
  for (std::size_t n = start; n <= last; ++n) least = std::min(least, d[n - 1]);
  if (least > 10.0 * eps) return XVerdict::NotX;
  return XVerdict::Inconclusive;
}

inline void require_contractive(const Filtration& F, double tol = kDefaultTol) {
  for (std::size_t n = 1; n <= F.horizon(); ++n)
    if (!is_contractive(F.level(n), tol))
      throw lattice_error("X-martingale classification needs a contractive filtration (E_" +
                          std::to_string(n) + " has norm " + std::to_string(operator_norm(F.level(n))) + ")");
}

inline XVerdict classify_X(const MartingaleSeq& A, const Filtration& F, std::optional<double> eps_x = std::nullopt,
                           double window_fraction = 0.25) {
  require_contractive(F);
  const double eps = eps_x.value_or(default_eps_x(seq_norm(A)));
  return x_verdict_from_profile(x_defect_profile(A, F), eps, window_fraction);
}

inline ClassificationReport classify(const MartingaleSeq& A, const Filtration& F,
                                     const ClassifyOptions& options = {}) {
  detail::require_horizon(A, F, "classify");
  require_contractive(F);
  ClassificationReport r;
  r.horizon = A.size();
  r.tol = options.tol;
  r.window_fraction = options.window_fraction;
  r.window_start = window_start(r.horizon, options.window_fraction);
  r.seq_norm = seq_norm(A);
  r.eps_x = options.eps_x.value_or(default_eps_x(r.seq_norm));
  r.x_defects = x_defect_profile(A, F);
  r.one_step_defects = one_step_defects(A, F);

  double worst = 0.0;
  for (double d : r.x_defects) worst = std::max(worst, d);
  r.is_martingale = worst <= r.tol;
  r.e_witness = classify_E(A, F, r.tol);
  r.x_verdict = x_verdict_from_profile(r.x_defects, r.eps_x, r.window_fraction);
  return r;
}

struct LatticeClosureReport {
  ClassificationReport sequence;
  ClassificationReport absolute;
  bool martingale_preserved = true;  ///< A martingale implies |A| martingale
  bool e_preserved = true;           ///< A E-martingale implies |A| E-martingale
  bool x_preserved = true;           ///< A X-martingale implies |A| X-martingale

  bool closed() const { return martingale_preserved && e_preserved && x_preserved; }
};

/// Classifies A and |A| and reports whether |A| stays in every class A is in.
inline LatticeClosureReport check_lattice_closure(const MartingaleSeq& A, const Filtration& F,
                                                  const ClassifyOptions& options = {}) {
  LatticeClosureReport r;
  r.sequence = classify(A, F, options);
  r.absolute = classify(abs_seq(A), F, options);
  r.martingale_preserved = !r.sequence.is_martingale || r.absolute.is_martingale;
  r.e_preserved = !r.sequence.e_witness || r.absolute.e_witness.has_value();
  r.x_preserved = r.sequence.x_verdict != XVerdict::XMartingale ||
                  r.absolute.x_verdict == XVerdict::XMartingale;
  return r;
}

// ---------------------------------------------------------------------------
// Constructions

/// (E_n x)_n, a martingale by the filtration law.
inline MartingaleSeq from_terminal(const Filtration& F, const LatticeVector& x) {
  require_same_space(F.space(), x.space(), "from_terminal");
  std::vector<LatticeVector> out;
  out.reserve(F.horizon());
  for (std::size_t n = 1; n <= F.horizon(); ++n) out.push_back(apply(F.level(n), x));
  return MartingaleSeq(F.space(), std::move(out));
}

/// Keeps x_n for n <= m and continues with E_n x afterwards.
inline MartingaleSeq tail_modify(const MartingaleSeq& A, const Filtration& F, const LatticeVector& x,
                                 std::size_t m) {
  detail::require_horizon(A, F, "tail_modify");
  require_same_space(A.space(), x.space(), "tail_modify");
  std::vector<LatticeVector> out;
  out.reserve(A.size());
  for (std::size_t n = 1; n <= A.size(); ++n)
    out.push_back(n <= m ? A.at(n) : apply(F.level(n), x));
  return MartingaleSeq(A.space(), std::move(out));
}

/// y_1 = c x_1, y_n = x_n otherwise.
inline MartingaleSeq scale_head(const MartingaleSeq& A, double c) {
  std::vector<LatticeVector> out = A.vectors();
  out.front() = c * out.front();
  return MartingaleSeq(A.space(), std::move(out));
}

/// x_n = x / n, n = 1..N.
inline MartingaleSeq gen_null(const LatticeVector& x, std::size_t N) {
  if (N == 0) throw lattice_error("gen_null: N must be >= 1");
  std::vector<LatticeVector> out;
  for (std::size_t n = 1; n <= N; ++n) out.push_back((1.0 / static_cast<double>(n)) * x);
  return MartingaleSeq(x.space(), std::move(out));
}

struct Instance {
  Filtration filtration;
  MartingaleSeq sequence;
};

/// x_n = 2^n 1_[0, 2^-n] - 1 on 2^L dyadic cells, n = 1..L, with the dyadic filtration.
inline Instance gen_haar(std::size_t L) {
  Filtration F = build_dyadic(L);
  const std::size_t cells = F.space()->dim();
  std::vector<LatticeVector> xs;
  for (std::size_t n = 1; n <= L; ++n) {
    const std::size_t head = std::size_t{1} << (L - n);
    std::vector<double> c(cells, -1.0);
    std::fill_n(c.begin(), head, std::ldexp(1.0, static_cast<int>(n)) - 1.0);
    xs.emplace_back(F.space(), std::move(c));
  }
  MartingaleSeq A(F.space(), std::move(xs));
  return {std::move(F), std::move(A)};
}

/// x_n = (-1, 1, ..., -1, 1, 0, ...) with 2n leading entries, n = 1..K, on the
/// pairing filtration of dim 2K.  The fully averaging level and the zero head
/// term are dropped, so level n here keeps 2n coordinates and level K is I.
inline Instance gen_pairing_example(std::size_t K) {
  Filtration F = build_pairing(K).suffix(2);
  std::vector<LatticeVector> xs;
  for (std::size_t n = 1; n <= K; ++n) {
    std::vector<double> c(2 * K, 0.0);
    for (std::size_t i = 0; i < 2 * n; ++i) c[i] = (i % 2 == 0) ? -1.0 : 1.0;
    xs.emplace_back(F.space(), std::move(c));
  }
  MartingaleSeq A(F.space(), std::move(xs));
  return {std::move(F), std::move(A)};
}

struct HarmonicTail {
  Filtration filtration;
  /// x_n = sum_{i=n}^{N} e_i / i
  MartingaleSeq limit;
  /// family[m-1] = A^m for m = 1..N-1: x_n for n <= m, y_n / m afterwards,
  /// with y_n = sum_{i<=n} e_i / i.
  std::vector<MartingaleSeq> family;
};

inline HarmonicTail gen_harmonic_tail(std::size_t N) {
  if (N < 2) throw lattice_error("gen_harmonic_tail: N must be >= 2");
  Filtration F = build_truncation(N);
  const SpaceRef& space = F.space();
  std::vector<LatticeVector> tails;
  std::vector<LatticeVector> heads;
  for (std::size_t n = 1; n <= N; ++n) {
    std::vector<double> tail(N, 0.0);
    std::vector<double> head(N, 0.0);
    for (std::size_t i = 1; i <= N; ++i) {
      const double v = 1.0 / static_cast<double>(i);
      if (i >= n) tail[i - 1] = v;
      if (i <= n) head[i - 1] = v;
    }
    tails.emplace_back(space, std::move(tail));
    heads.emplace_back(space, std::move(head));
  }

  std::vector<MartingaleSeq> family;
  for (std::size_t m = 1; m < N; ++m) {
    std::vector<LatticeVector> xs;
    for (std::size_t n = 1; n <= N; ++n)
      xs.push_back(n <= m ? tails[n - 1] : (1.0 / static_cast<double>(m)) * heads[n - 1]);
    family.emplace_back(space, std::move(xs));
  }
  MartingaleSeq limit(space, std::move(tails));
  return {std::move(F), std::move(limit), std::move(family)};
}

}  // namespace lattice_lab
