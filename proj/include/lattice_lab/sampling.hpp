#pragma once

// Random vectors, operators and martingale-like sequences for property trials.

#include <cstddef>
#include <vector>

#include "lattice_lab/filtration.hpp"
#include "lattice_lab/lattice.hpp"
#include "lattice_lab/martingale.hpp"
#include "lattice_lab/rng.hpp"

namespace lattice_lab {

/// Coordinates uniform in [-scale, scale].
inline LatticeVector random_vector(const SpaceRef& space, Rng& rng, double scale = 1.0) {
  std::vector<double> c(space->dim());
  for (double& v : c) v = uniform(rng, -scale, scale);
  return LatticeVector(space, std::move(c));
}

/// Entries uniform in [0, scale].
inline PosOperator random_positive_operator(const SpaceRef& space, Rng& rng, double scale = 1.0) {
  const std::size_t n = space->dim();
  std::vector<double> e(n * n);
  for (double& v : e) v = uniform(rng, 0.0, scale);
  return PosOperator(space, std::move(e));
}

struct GeneratedSequence {
  MartingaleSeq sequence;
  /// Index from which the construction guarantees the one-step law (E-martingales only).
  std::size_t planted_witness = 1;
  /// Norm of the null perturbation z (X-martingales only).
  double perturbation_norm = 0.0;
};

/// (E_n x) with random entries replacing the first l-1 terms, l drawn in
/// [1, N-1] (l = 1 when N = 1).  An E-martingale with witness at most l.
inline GeneratedSequence random_e_martingale(const Filtration& F, Rng& rng) {
  const std::size_t N = F.horizon();
  const MartingaleSeq base = from_terminal(F, random_vector(F.space(), rng));
  const std::size_t l = N > 1 ? uniform_index(rng, 1, N - 1) : 1;
  std::vector<LatticeVector> xs = base.vectors();
  for (std::size_t n = 1; n < l; ++n) xs[n - 1] = random_vector(F.space(), rng);
  return {MartingaleSeq(F.space(), std::move(xs)), l, 0.0};
}

/// (E_n x + z/n) with ||z|| = amplitude.  For m >= n,
/// ||E_n x_m - x_n|| = ||E_n z/m - z/n|| <= 2 amplitude / n on a contractive
/// filtration, so the defect profile decays like 1/n.
inline GeneratedSequence random_x_martingale(const Filtration& F, Rng& rng, double amplitude = 1.0) {
  const MartingaleSeq base = from_terminal(F, random_vector(F.space(), rng));
  LatticeVector z = random_vector(F.space(), rng);
  const double zn = norm(z);
  if (zn > 0.0) z = (amplitude / zn) * z;
  const MartingaleSeq perturbation = gen_null(z, F.horizon());
  return {seq_add(base, perturbation), 1, norm(z)};
}

/// Independent random terms; generally in none of the classes.
inline GeneratedSequence random_sequence(const Filtration& F, Rng& rng) {
  std::vector<LatticeVector> xs;
  for (std::size_t n = 1; n <= F.horizon(); ++n) xs.push_back(random_vector(F.space(), rng));
  return {MartingaleSeq(F.space(), std::move(xs)), 1, 0.0};
}

}  // namespace lattice_lab
