#pragma once

// Executable checks of the structural results about martingale-like
// sequences.  Each check runs on concrete or randomized finite instances and
// returns evidence: CONFIRMED when the conclusion holds on every instance that
// meets the premises, VIOLATED with a reproducible witness when it does not,
// INCONCLUSIVE when the premises are not met or the finite horizon cannot
// decide.  A VIOLATED result on a premise-satisfying instance is a bug.
//
// Randomized checks draw trial t from trial_stream(seed, t), so every result is
// reproducible from (id, descriptor, seed).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lattice_lab/filtration.hpp"
#include "lattice_lab/lattice.hpp"
#include "lattice_lab/martingale.hpp"
#include "lattice_lab/operator.hpp"
#include "lattice_lab/rng.hpp"
#include "lattice_lab/sampling.hpp"

namespace lattice_lab {

enum class Status { Confirmed, Violated, Inconclusive };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Confirmed: return "CONFIRMED";
    case Status::Violated: return "VIOLATED";
    case Status::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

struct TheoremResult {
  std::string id;
  std::string descriptor;
  Status status = Status::Inconclusive;
  nlohmann::json witness = nlohmann::json::object();
  std::uint64_t seed = 0;
};

inline nlohmann::json to_json(const TheoremResult& r) {
  return {{"id", r.id},
          {"descriptor", r.descriptor},
          {"status", to_string(r.status)},
          {"witness", r.witness},
          {"seed", r.seed},
          {"note", "finite-horizon evidence consistent with the stated result, not a proof"}};
}

/// Slack for inequalities that hold exactly in real arithmetic.
inline constexpr double kInequalitySlack = 1e-9;

namespace detail {

inline nlohmann::json optional_index(const std::optional<std::size_t>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

/// CONFIRMED at or below eps, INCONCLUSIVE up to the finite-horizon bound
/// 2 eps that the premises guarantee, VIOLATED beyond it.
inline Status grade_tail(double value, double eps) {
  if (value <= eps) return Status::Confirmed;
  if (value <= 2.0 * eps + kInequalitySlack) return Status::Inconclusive;
  return Status::Violated;
}

inline bool is_filtration(const Filtration& F) { return validate(F, true).ok(); }

inline bool all_band_projections(const Filtration& F) {
  for (const auto& E : F.operators())
    if (!is_identity(E) && !is_band_projection(E)) return false;
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Instance families for randomized trials

struct NamedFiltration {
  Filtration filtration;
  std::string descriptor;
};

/// Builder picked by trial index (cycling over every builder), sizes drawn from rng.
inline NamedFiltration random_filtration(Rng& rng, std::size_t trial) {
  switch (trial % 5) {
    case 0: {
      const std::size_t N = uniform_index(rng, 2, 12);
      return {build_truncation(N), "truncation(N=" + std::to_string(N) + ")"};
    }
    case 1: {
      const std::size_t K = uniform_index(rng, 1, 5);
      return {build_pairing(K), "pairing(K=" + std::to_string(K) + ")"};
    }
    case 2: {
      const std::size_t L = uniform_index(rng, 2, 5);
      return {build_dyadic(L), "dyadic(L=" + std::to_string(L) + ")"};
    }
    default: {
      const std::size_t dim = uniform_index(rng, 2, 10);
      const std::size_t depth = uniform_index(rng, 2, dim);
      const std::uint64_t sub = rng();
      const NormKind kind = trial % 5 == 3 ? NormKind::WeightedL1 : NormKind::Sup;
      return {build_random_nested(dim, depth, sub, kind),
              "random_nested(dim=" + std::to_string(dim) + ",depth=" + std::to_string(depth) +
                  ",seed=" + std::to_string(sub) + ",norm=" + to_string(kind) + ")"};
    }
  }
}

/// (|E_n x|) vs (E_n |x|): minimal l with ||E_n|x| - |E_n x||| <= tol for all
/// n in [l, N]; none if it fails at N.
inline std::optional<std::size_t> commute_abs_index(const Filtration& F, const LatticeVector& x,
                                                    double tol = kDefaultTol) {
  const LatticeVector ax = abs(x);
  std::size_t l = F.horizon() + 1;
  while (l > 1) {
    const PosOperator& E = F.level(l - 1);
    if (distance(abs(apply(E, x)), apply(E, ax)) > tol) break;
    --l;
  }
  if (l > F.horizon()) return std::nullopt;
  return l;
}

// ---------------------------------------------------------------------------
// Nesting M in M_E in M_X

namespace detail {

struct NestingTally {
  std::size_t instances = 0;
  std::size_t martingales = 0;
  std::size_t e_martingales = 0;
  std::size_t x_martingales = 0;
  std::size_t e_not_martingale = 0;
  std::size_t x_not_e = 0;
  nlohmann::json violation;

  /// Checks the implication chain on one classified instance.  Returns false on a violation.
  bool check(const ClassificationReport& r, const std::string& label) {
    ++instances;
    if (r.is_martingale) ++martingales;
    if (r.e_witness) ++e_martingales;
    if (r.x_verdict == XVerdict::XMartingale) ++x_martingales;
    if (r.e_witness && !r.is_martingale) ++e_not_martingale;
    if (!r.e_witness && r.x_verdict == XVerdict::XMartingale) ++x_not_e;

    std::string broken;
    if (r.is_martingale && r.e_witness != std::optional<std::size_t>{1})
      broken = "martingale without E-witness 1";
    else if (r.e_witness == std::optional<std::size_t>{1} && r.x_verdict != XVerdict::XMartingale)
      broken = "E-witness 1 without X_MARTINGALE";
    else if (r.e_witness && *r.e_witness <= r.window_start && r.x_verdict != XVerdict::XMartingale)
      broken = "E-witness inside the tail window without X_MARTINGALE";
    if (broken.empty()) return true;
    if (violation.is_null())
      violation = {{"instance", label}, {"reason", broken}, {"e_witness", optional_index(r.e_witness)},
                   {"x_verdict", to_string(r.x_verdict)}, {"x_defects", r.x_defects}};
    return false;
  }

  nlohmann::json summary() const {
    return {{"instances", instances},           {"martingales", martingales},
            {"e_martingales", e_martingales},   {"x_martingales", x_martingales},
            {"e_not_martingale", e_not_martingale}, {"x_not_e", x_not_e}};
  }
};

}  // namespace detail

inline constexpr const char* kNestingGenerators[] = {"from_terminal", "e_martingale", "x_martingale",
                                                     "null",          "scale_head",   "random"};

struct NestingTrial {
  NamedFiltration named;
  GeneratedSequence generated;
  std::size_t kind;  ///< index into kNestingGenerators
  std::string label;
};

/// Trial t of the nesting check: builder cycles with t, generator with t / 5.
inline NestingTrial nesting_trial(std::uint64_t seed, std::size_t t) {
  Rng rng = trial_stream(seed, t);
  NamedFiltration nf = random_filtration(rng, t);
  const Filtration& F = nf.filtration;
  const std::size_t kind = (t / 5) % 6;
  GeneratedSequence g = [&]() -> GeneratedSequence {
    switch (kind) {
      case 0: return {from_terminal(F, random_vector(F.space(), rng))};
      case 1: return random_e_martingale(F, rng);
      case 2: return random_x_martingale(F, rng);
      case 3: return {gen_null(random_vector(F.space(), rng), F.horizon())};
      case 4: return {scale_head(from_terminal(F, random_vector(F.space(), rng)), uniform(rng, -3.0, 3.0))};
      default: return random_sequence(F, rng);
    }
  }();
  std::string label = "trial " + std::to_string(t) + ": " + nf.descriptor + " / " + kNestingGenerators[kind];
  return {std::move(nf), std::move(g), kind, std::move(label)};
}

struct LabeledInstance {
  std::string label;
  Filtration filtration;
  MartingaleSeq sequence;
};

/// The constructed examples, including E-but-not-martingale and X-but-not-E cases.
inline std::vector<LabeledInstance> nesting_fixed_instances() {
  std::vector<LabeledInstance> out;
  const Instance haar = gen_haar(3);
  out.push_back({"haar(L=3)", haar.filtration, haar.sequence});
  out.push_back({"scale_head(haar(L=3), 2)", haar.filtration, scale_head(haar.sequence, 2.0)});
  const Instance pairing = gen_pairing_example(3);
  out.push_back({"pairing_example(K=3)", pairing.filtration, pairing.sequence});
  out.push_back({"|pairing_example(K=3)|", pairing.filtration, abs_seq(pairing.sequence)});
  const HarmonicTail harmonic = gen_harmonic_tail(16);
  out.push_back({"harmonic_tail(N=16)", harmonic.filtration, harmonic.limit});
  for (std::size_t m = 1; m <= harmonic.family.size(); ++m)
    out.push_back({"harmonic_tail(N=16) A^" + std::to_string(m), harmonic.filtration, harmonic.family[m - 1]});
  const Filtration T = build_truncation(16);
  out.push_back({"null(e1, N=16)", T, gen_null(LatticeVector::unit(T.space(), 1), 16)});
  return out;
}

/// Classifies `trials` random (filtration, sequence) pairs across every builder
/// and generator, plus the fixed constructions, and checks
///   martingale => E-witness 1 => X_MARTINGALE
/// and that an E-witness inside the tail window forces X_MARTINGALE.  Only the
/// forward implications are asserted.
inline TheoremResult verify_nesting(std::uint64_t seed, std::size_t trials = 100) {
  TheoremResult result{"nesting", "random builders x generators, trials=" + std::to_string(trials)};
  result.seed = seed;
  detail::NestingTally tally;
  nlohmann::json generator_violation;

  for (std::size_t t = 0; t < trials; ++t) {
    const NestingTrial trial = nesting_trial(seed, t);
    const Filtration& F = trial.named.filtration;
    const GeneratedSequence& g = trial.generated;
    const ClassificationReport r = classify(g.sequence, F);
    tally.check(r, trial.label);

    std::string broken;
    if (trial.kind == 0 && !r.is_martingale) broken = "(E_n x) is not a martingale";
    if (trial.kind == 1 && (!r.e_witness || *r.e_witness > g.planted_witness))
      broken = "planted E-martingale has no witness at or below " + std::to_string(g.planted_witness);
    if (trial.kind == 2) {
      const double N = static_cast<double>(F.horizon());
      for (std::size_t n = 1; n <= F.horizon(); ++n) {
        const double bound = 2.0 * g.perturbation_norm / static_cast<double>(n) + g.perturbation_norm / N;
        if (r.x_defects[n - 1] > bound + kInequalitySlack) broken = "defect exceeds 2|z|/n + |z|/N";
      }
    }
    if (!broken.empty() && generator_violation.is_null())
      generator_violation = {{"instance", trial.label}, {"reason", broken}};
  }
  for (const auto& inst : nesting_fixed_instances()) tally.check(classify(inst.sequence, inst.filtration), inst.label);

  result.witness = tally.summary();
  if (!tally.violation.is_null()) {
    result.status = Status::Violated;
    result.witness["violation"] = tally.violation;
  } else if (!generator_violation.is_null()) {
    result.status = Status::Violated;
    result.witness["violation"] = generator_violation;
  } else {
    result.status = Status::Confirmed;
  }
  return result;
}

// ---------------------------------------------------------------------------
// M_X closed in l-infinity(X)

/// Given X-martingales A^k converging to `limit`, checks the limit is not
/// NOT_X and replays the estimate
///   ||E_n x_l - x_n|| <= ||E_n (x_l - x^k_l)|| + ||E_n x^k_l - x^k_n|| + ||x^k_n - x_n||
/// together with ||E_n (x_l - x^k_l)|| <= ||x_l - x^k_l|| for every member and l >= n.
inline TheoremResult verify_mx_closed(const Filtration& F, const std::vector<MartingaleSeq>& family,
                                      const MartingaleSeq& limit, std::string descriptor,
                                      const ClassifyOptions& options = {}) {
  TheoremResult result{"mx-closed", std::move(descriptor)};
  if (family.empty()) throw lattice_error("verify_mx_closed: empty family");
  if (!detail::is_filtration(F)) {
    result.witness = {{"premise", "not a contractive filtration"}};
    return result;
  }

  const ClassificationReport lim = classify(limit, F, options);
  std::vector<std::size_t> non_x_members;
  std::vector<double> distances;
  for (std::size_t k = 1; k <= family.size(); ++k) {
    const MartingaleSeq& Ak = family[k - 1];
    if (classify(Ak, F, options).x_verdict != XVerdict::XMartingale) non_x_members.push_back(k);
    distances.push_back(seq_distance(Ak, limit));
  }

  // Replay of the triangle estimate; holds for any sequences over a contractive filtration.
  nlohmann::json replay_failure;
  const std::size_t N = F.horizon();
  for (std::size_t k = 1; k <= family.size() && replay_failure.is_null(); ++k) {
    const MartingaleSeq& Ak = family[k - 1];
    for (std::size_t n = 1; n <= N && replay_failure.is_null(); ++n) {
      const PosOperator& E = F.level(n);
      const double member_gap = distance(Ak.at(n), limit.at(n));
      for (std::size_t l = n; l <= N; ++l) {
        const LatticeVector diff = limit.at(l) - Ak.at(l);
        const double through_E = norm(apply(E, diff));
        const double lhs = distance(apply(E, limit.at(l)), limit.at(n));
        const double rhs = through_E + distance(apply(E, Ak.at(l)), Ak.at(n)) + member_gap;
        if (lhs > rhs + kInequalitySlack || through_E > norm(diff) + kInequalitySlack) {
          replay_failure = {{"member", k}, {"n", n}, {"l", l}, {"lhs", lhs}, {"rhs", rhs}};
          break;
        }
      }
    }
  }

  result.witness = {{"limit_verdict", to_string(lim.x_verdict)},
                    {"limit_defects", lim.x_defects},
                    {"member_distances", distances},
                    {"non_x_members", non_x_members}};
  const bool converges = distances.back() <= lim.eps_x;
  if (!replay_failure.is_null()) {
    result.status = Status::Violated;
    result.witness["violation"] = replay_failure;
  } else if (!non_x_members.empty() || !converges) {
    result.status = Status::Inconclusive;
    result.witness["premise"] = !non_x_members.empty() ? "some members are not X-martingales"
                                                       : "family does not reach the limit within eps_x";
  } else if (lim.x_verdict == XVerdict::NotX) {
    result.status = Status::Violated;
    result.witness["violation"] = "limit of X-martingales classified NOT_X";
  } else {
    result.status = Status::Confirmed;
  }
  return result;
}

/// Random instance: A = (E_n x + z/n) with small |z|, A^k = A + (z'/(k n)).
inline TheoremResult verify_mx_closed(const Filtration& F, std::uint64_t seed, std::size_t members = 8,
                                      std::string descriptor = "random X-martingale family") {
  Rng rng = trial_stream(seed, 0);
  const MartingaleSeq limit = random_x_martingale(F, rng, 0.01).sequence;
  const LatticeVector z = random_vector(F.space(), rng, 0.01);
  std::vector<MartingaleSeq> family;
  for (std::size_t k = 1; k <= members; ++k)
    family.push_back(seq_add(limit, gen_null((1.0 / static_cast<double>(k)) * z, F.horizon())));
  TheoremResult r = verify_mx_closed(F, family, limit, std::move(descriptor));
  r.seed = seed;
  return r;
}

// ---------------------------------------------------------------------------
// Convergent X-martingales

namespace detail {

struct ConvergentPremise {
  bool met = false;
  std::string reason;
  ClassificationReport report;
  double convergence_gap = 0.0;  ///< ||x_N - x||
};

inline ConvergentPremise convergent_premise(const MartingaleSeq& A, const LatticeVector& x, const Filtration& F,
                                            const ClassifyOptions& options) {
  ConvergentPremise p;
  if (!is_filtration(F)) {
    p.reason = "not a contractive filtration";
    return p;
  }
  p.report = classify(A, F, options);
  // x_n -> x is judged at the horizon: for (E_n x) on a dense filtration the
  // gap closes only at n = N, so a window-wide test would reject the basic case.
  p.convergence_gap = distance(A.at(A.size()), x);
  if (p.report.x_verdict != XVerdict::XMartingale)
    p.reason = "sequence is not classified X_MARTINGALE";
  else if (p.convergence_gap > p.report.eps_x)
    p.reason = "||x_N - x|| exceeds eps_x";
  else
    p.met = true;
  return p;
}

}  // namespace detail

/// For X-martingales with x_n -> x: e_n = max_{m >= n} ||E_m x - x_m|| becomes
/// small.  Also replays ||E_n x - x_n|| <= ||x - x_m|| + ||E_n x_m - x_n||.
inline TheoremResult verify_lemma_convergent(const MartingaleSeq& A, const LatticeVector& x, const Filtration& F,
                                             std::string descriptor, const ClassifyOptions& options = {}) {
  TheoremResult result{"lemma-convergent", std::move(descriptor)};
  const auto premise = detail::convergent_premise(A, x, F, options);
  if (!premise.met) {
    result.witness = {{"premise", premise.reason}};
    return result;
  }
  const std::size_t N = A.size();
  std::vector<double> gaps(N);  // ||E_n x - x_n||
  for (std::size_t n = 1; n <= N; ++n) gaps[n - 1] = distance(apply(F.level(n), x), A.at(n));
  std::vector<double> e(N);
  double running = 0.0;
  for (std::size_t n = N; n >= 1; --n) {
    running = std::max(running, gaps[n - 1]);
    e[n - 1] = running;
  }

  for (std::size_t n = 1; n <= N; ++n)
    for (std::size_t m = n; m <= N; ++m) {
      const double rhs = distance(x, A.at(m)) + pair_defect(A, F, n, m);
      if (gaps[n - 1] > rhs + kInequalitySlack) {
        result.status = Status::Violated;
        result.witness = {{"violation", "||E_n x - x_n|| exceeds ||x - x_m|| + ||E_n x_m - x_n||"},
                          {"n", n}, {"m", m}, {"lhs", gaps[n - 1]}, {"rhs", rhs}};
        return result;
      }
    }

  const double tail = e[premise.report.window_start - 1];
  result.status = detail::grade_tail(tail, premise.report.eps_x);
  result.witness = {{"e", e}, {"tail_max", tail}, {"eps_x", premise.report.eps_x},
                    {"window_start", premise.report.window_start}};
  return result;
}

/// Builds A^m = tail_modify(A, x, m) for m = 1..N-1 and checks each is an
/// E-martingale with witness at most m+1 and that ||A^m - A|| decreases to
/// the threshold.  For m = N-1 the only candidate witness is N itself, which
/// the finite horizon cannot certify, so the witness check stops at N-2.
inline TheoremResult verify_halfdense(const MartingaleSeq& A, const LatticeVector& x, const Filtration& F,
                                      std::string descriptor, const ClassifyOptions& options = {}) {
  TheoremResult result{"halfdense", std::move(descriptor)};
  const auto premise = detail::convergent_premise(A, x, F, options);
  const std::size_t N = A.size();
  if (!premise.met || N < 2) {
    result.witness = {{"premise", premise.met ? "horizon too short" : premise.reason}};
    return result;
  }

  std::vector<double> distances;
  std::vector<nlohmann::json> witnesses;
  for (std::size_t m = 1; m < N; ++m) {
    const MartingaleSeq Am = tail_modify(A, F, x, m);
    const double dist = seq_distance(Am, A);
    double direct = 0.0;
    for (std::size_t n = m + 1; n <= N; ++n) direct = std::max(direct, distance(apply(F.level(n), x), A.at(n)));
    const auto w = classify_E(Am, F, options.tol);
    witnesses.push_back(detail::optional_index(w));
    distances.push_back(dist);

    std::string broken;
    if (m + 1 < N && (!w || *w > m + 1)) broken = "A^m has no E-witness at or below m+1";
    if (std::abs(dist - direct) > kInequalitySlack) broken = "||A^m - A|| differs from max_{n>m} ||E_n x - x_n||";
    if (m > 1 && dist > distances[m - 2] + kInequalitySlack) broken = "||A^m - A|| increased";
    if (!broken.empty()) {
      result.status = Status::Violated;
      result.witness = {{"violation", broken}, {"m", m}, {"distances", distances}, {"witnesses", witnesses}};
      return result;
    }
  }
  const std::size_t m_star = std::min(premise.report.window_start, N - 1);
  const double tail = distances[m_star - 1];
  result.status = detail::grade_tail(tail, premise.report.eps_x);
  result.witness = {{"distances", distances}, {"witnesses", witnesses}, {"tail_distance", tail},
                    {"eps_x", premise.report.eps_x}};
  return result;
}

// ---------------------------------------------------------------------------
// M_E not closed

/// Harmonic-tail counterexample: every A^m is an E-martingale, ||A^m - A|| = 1/m,
/// and the limit A is not an E-martingale (while being an X-martingale).
inline TheoremResult verify_me_not_closed(std::size_t N = 64) {
  TheoremResult result{"me-not-closed", "harmonic_tail(N=" + std::to_string(N) + ")"};
  const HarmonicTail h = gen_harmonic_tail(N);
  const ClassificationReport lim = classify(h.limit, h.filtration);

  std::vector<nlohmann::json> witnesses;
  std::vector<double> distance_errors;
  std::string broken;
  for (std::size_t m = 1; m < N; ++m) {
    const MartingaleSeq& Am = h.family[m - 1];
    const auto w = classify_E(Am, h.filtration);
    witnesses.push_back(detail::optional_index(w));
    const double err = std::abs(seq_distance(Am, h.limit) - 1.0 / static_cast<double>(m));
    distance_errors.push_back(err);
    if (broken.empty() && m + 1 < N && (!w || *w > m + 1)) broken = "A^" + std::to_string(m) + " lacks an E-witness <= m+1";
    if (broken.empty() && err > kDefaultTol) broken = "||A^" + std::to_string(m) + " - A|| != 1/m";
  }
  // A^{N-1} differs from A only in its last term; its single candidate witness is the horizon itself.
  const auto last_steps = one_step_defects(h.family.back(), h.filtration);

  if (broken.empty() && lim.e_witness) broken = "limit A has an E-witness";
  if (broken.empty() && lim.x_verdict != XVerdict::XMartingale) broken = "limit A is not X_MARTINGALE";

  double max_profile_error = 0.0;
  for (std::size_t n = 1; n < N; ++n)
    max_profile_error = std::max(max_profile_error, std::abs(lim.x_defects[n - 1] - 1.0 / static_cast<double>(n)));
  if (broken.empty() && max_profile_error > kDefaultTol) broken = "limit defect profile differs from 1/n";

  result.witness = {{"family_witnesses", witnesses},
                    {"max_distance_error", *std::max_element(distance_errors.begin(), distance_errors.end())},
                    {"limit_e_witness", detail::optional_index(lim.e_witness)},
                    {"limit_x_verdict", to_string(lim.x_verdict)},
                    {"limit_profile_max_error", max_profile_error},
                    {"last_member_one_step_defect_at_horizon", last_steps.back()}};
  if (!broken.empty()) {
    result.status = Status::Violated;
    result.witness["violation"] = broken;
  } else {
    result.status = Status::Confirmed;
  }
  return result;
}

// ---------------------------------------------------------------------------
// When is M_E a vector lattice

/// Closure mode: fraction of random E-martingales on F whose |A| is again an
/// E-martingale.  Counterexample mode: on the pairing and Haar constructions A
/// is a martingale while |A| is not an E-martingale, so M_E is not a lattice there.
inline TheoremResult verify_vl_equivalence(const Filtration& F, std::uint64_t seed, std::size_t trials,
                                           std::string descriptor) {
  TheoremResult result{"vl-equivalence", std::move(descriptor)};
  result.seed = seed;
  std::size_t closed = 0;
  nlohmann::json first_open;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = trial_stream(seed, t);
    const GeneratedSequence g = random_e_martingale(F, rng);
    if (classify_E(abs_seq(g.sequence), F)) {
      ++closed;
    } else if (first_open.is_null()) {
      first_open = {{"trial", t}, {"sequence_witness", detail::optional_index(classify_E(g.sequence, F))}};
    }
  }
  const bool band = detail::all_band_projections(F);
  const double fraction = trials ? static_cast<double>(closed) / static_cast<double>(trials) : 1.0;

  nlohmann::json counterexamples = nlohmann::json::array();
  std::string broken;
  auto counterexample = [&](const std::string& name, const Instance& inst) {
    const MartingaleSeq absA = abs_seq(inst.sequence);
    const bool martingale = classify_martingale(inst.sequence, inst.filtration);
    const auto w = classify_E(absA, inst.filtration);
    const double defect_at_1 = one_step_defects(absA, inst.filtration).front();
    counterexamples.push_back({{"instance", name}, {"is_martingale", martingale},
                               {"abs_e_witness", detail::optional_index(w)},
                               {"abs_one_step_defect_n1", defect_at_1}});
    if (broken.empty() && (!martingale || w)) broken = name + " no longer separates M_E from a lattice";
  };
  counterexample("pairing_example(K=3)", gen_pairing_example(3));
  counterexample("haar(L=3)", gen_haar(3));

  if (broken.empty() && band && closed != trials) broken = "band-projection filtration with |A| outside M_E";

  result.witness = {{"closure_fraction", fraction}, {"trials", trials}, {"band_projections", band},
                    {"counterexamples", counterexamples}};
  if (!first_open.is_null()) result.witness["first_non_closed"] = first_open;
  if (!band && trials > 0 && closed == trials) result.witness["open_question_candidate"] = true;
  if (!broken.empty()) {
    result.status = Status::Violated;
    result.witness["violation"] = broken;
  } else {
    result.status = Status::Confirmed;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Band-projection filtrations

/// On filtrations of band projections: |A| keeps an E-witness no later than A's,
/// and ||E_n|x_m| - |x_n||| <= ||E_n x_m - x_n|| for every pair, so the defect
/// profile of |A| is dominated by that of A.
inline TheoremResult verify_band_propositions(const Filtration& F, std::uint64_t seed, std::size_t trials,
                                              std::string descriptor) {
  TheoremResult result{"band-propositions", std::move(descriptor)};
  result.seed = seed;
  if (!detail::is_filtration(F) || !detail::all_band_projections(F)) {
    result.witness = {{"premise", "filtration is not made of band projections"}};
    return result;
  }
  const std::size_t N = F.horizon();
  std::size_t e_checked = 0;
  std::size_t x_checked = 0;
  double worst_margin = -1.0;  // max over pairs of (abs defect - defect)
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = trial_stream(seed, t);
    const GeneratedSequence ge = random_e_martingale(F, rng);
    const auto w = classify_E(ge.sequence, F);
    const auto wa = classify_E(abs_seq(ge.sequence), F);
    if (w) {
      ++e_checked;
      if (!wa || *wa > *w) {
        result.status = Status::Violated;
        result.witness = {{"violation", "|A| lost the E-witness"}, {"trial", t},
                          {"witness", *w}, {"abs_witness", detail::optional_index(wa)}};
        return result;
      }
    }

    const GeneratedSequence gx = random_x_martingale(F, rng);
    const MartingaleSeq& A = gx.sequence;
    const MartingaleSeq absA = abs_seq(A);
    for (std::size_t n = 1; n <= N; ++n)
      for (std::size_t m = n; m <= N; ++m) {
        const double lhs = pair_defect(absA, F, n, m);
        const double rhs = pair_defect(A, F, n, m);
        worst_margin = std::max(worst_margin, lhs - rhs);
        if (lhs > rhs + kInequalitySlack) {
          result.status = Status::Violated;
          result.witness = {{"violation", "||E_n|x_m| - |x_n||| > ||E_n x_m - x_n||"}, {"trial", t},
                            {"n", n}, {"m", m}, {"lhs", lhs}, {"rhs", rhs}};
          return result;
        }
      }
    const ClassificationReport ra = classify(A, F);
    const ClassificationReport rb = classify(absA, F);
    if (ra.x_verdict == XVerdict::XMartingale && rb.x_verdict != XVerdict::XMartingale) {
      result.status = Status::Violated;
      result.witness = {{"violation", "|A| of an X-martingale is not X_MARTINGALE"}, {"trial", t}};
      return result;
    }
    ++x_checked;
  }
  result.status = Status::Confirmed;
  result.witness = {{"e_martingales_checked", e_checked}, {"x_martingales_checked", x_checked},
                    {"worst_margin", worst_margin}};
  return result;
}

// ---------------------------------------------------------------------------
// Dense filtrations with M_E a lattice

/// For basis vectors, `extra` vectors and `samples` random vectors, finds the
/// minimal l with |E_n x| = E_n|x| for n >= l.  Where (|E_n x|) is an
/// E-martingale with witness w on a dense filtration, l <= w must hold.
inline TheoremResult verify_filt_char(const Filtration& F, std::string descriptor, double tol = kDefaultTol,
                                      std::uint64_t seed = 0, std::size_t samples = 16,
                                      const std::vector<LatticeVector>& extra = {}) {
  TheoremResult result{"filt-char", std::move(descriptor)};
  result.seed = seed;
  const bool dense = is_dense(F, tol);

  std::vector<LatticeVector> probes;
  for (std::size_t i = 1; i <= F.space()->dim(); ++i) probes.push_back(LatticeVector::unit(F.space(), i));
  probes.insert(probes.end(), extra.begin(), extra.end());
  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng = trial_stream(seed, s);
    probes.push_back(random_vector(F.space(), rng));
  }

  nlohmann::json rows = nlohmann::json::array();
  bool premise = dense;
  bool all_found = true;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const LatticeVector& x = probes[k];
    const auto l = commute_abs_index(F, x, tol);
    const auto w = classify_E(abs_seq(from_terminal(F, x)), F, tol);
    rows.push_back({{"probe", k}, {"l", detail::optional_index(l)}, {"abs_martingale_witness", detail::optional_index(w)}});
    if (!l) all_found = false;
    if (!w) premise = false;
    if (dense && l && w && *l > *w) {
      result.status = Status::Violated;
      result.witness = {{"violation", "|E_n x| != E_n|x| past the E-witness of (|E_n x|)"}, {"probe", k},
                        {"l", *l}, {"witness", *w}};
      return result;
    }
  }
  result.witness = {{"dense", dense}, {"probes", rows}, {"premise_met", premise}};
  if (!premise) {
    result.status = Status::Inconclusive;
    result.witness["premise"] = dense ? "(|E_n x|) is not an E-martingale for some probe" : "filtration is not dense";
  } else {
    result.status = all_found ? Status::Confirmed : Status::Violated;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Default suite

inline const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids{"nesting",  "mx-closed",      "lemma-convergent", "halfdense",
                                            "me-not-closed", "vl-equivalence", "band-propositions", "filt-char"};
  return ids;
}

/// Runs one named check on its default instances.  Throws lattice_error for unknown ids.
inline std::vector<TheoremResult> run_theorem(const std::string& id, std::uint64_t seed, std::size_t trials) {
  std::vector<TheoremResult> out;
  auto stamp = [seed](TheoremResult r) {
    r.seed = seed;
    return r;
  };
  if (id == "nesting") {
    out.push_back(verify_nesting(seed, trials));
  } else if (id == "mx-closed") {
    out.push_back(verify_mx_closed(build_truncation(64), seed, 8, "truncation(N=64), random family"));
    out.push_back(verify_mx_closed(build_random_nested(24, 24, seed), seed, 8, "random_nested(24,24), random family"));
    const HarmonicTail h = gen_harmonic_tail(64);
    out.push_back(stamp(verify_mx_closed(h.filtration, h.family, h.limit, "harmonic_tail(N=64) family")));
  } else if (id == "lemma-convergent" || id == "halfdense") {
    const bool lemma = id == "lemma-convergent";
    auto run = [&](const MartingaleSeq& A, const LatticeVector& x, const Filtration& F, std::string d) {
      return stamp(lemma ? verify_lemma_convergent(A, x, F, std::move(d)) : verify_halfdense(A, x, F, std::move(d)));
    };
    const Filtration T = build_truncation(64);
    Rng rng = trial_stream(seed, 0);
    const LatticeVector x = random_vector(T.space(), rng);
    out.push_back(run(from_terminal(T, x), x, T, "from_terminal on truncation(N=64)"));
    out.push_back(run(gen_null(LatticeVector::unit(T.space(), 1), 64), LatticeVector::zero(T.space()), T,
                      "null(e1, N=64) -> 0"));
    const Filtration D = build_random_nested(48, 48, seed);
    const LatticeVector y = random_vector(D.space(), rng);
    out.push_back(run(seq_add(from_terminal(D, y), gen_null((0.01 / norm(y)) * y, 48)), y, D,
                      "E_n y + y/(100 n |y|) on random_nested(48,48)"));
  } else if (id == "me-not-closed") {
    out.push_back(stamp(verify_me_not_closed(64)));
  } else if (id == "vl-equivalence") {
    out.push_back(verify_vl_equivalence(build_truncation(16), seed, trials, "truncation(N=16)"));
    out.push_back(verify_vl_equivalence(build_dyadic(4), seed, trials, "dyadic(L=4)"));
    out.push_back(verify_vl_equivalence(build_random_nested(8, 5, seed), seed, trials, "random_nested(8,5)"));
  } else if (id == "band-propositions") {
    out.push_back(verify_band_propositions(build_truncation(16), seed, trials, "truncation(N=16)"));
    out.push_back(verify_band_propositions(build_truncation(5), seed, trials, "truncation(N=5)"));
  } else if (id == "filt-char") {
    out.push_back(verify_filt_char(build_truncation(16), "truncation(N=16)", kDefaultTol, seed));
    out.push_back(verify_filt_char(build_dyadic(4), "dyadic(L=4)", kDefaultTol, seed));
    const Filtration P = build_pairing(3);
    std::vector<double> c(6, 0.0);
    c[0] = -1.0;
    c[1] = 1.0;
    out.push_back(verify_filt_char(P, "pairing(K=3)", kDefaultTol, seed, 16, {LatticeVector(P.space(), c)}));
  } else {
    throw lattice_error("unknown theorem id '" + id + "'");
  }
  return out;
}

}  // namespace lattice_lab
