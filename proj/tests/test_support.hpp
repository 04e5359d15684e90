#pragma once

// Shared generators and oracles for the test suites. Everything here is
// deterministic in the seeds it is handed; oracles are kept independent of
// the library paths they check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "colim/chain.hpp"
#include "colim/colimit.hpp"
#include "colim/linalg.hpp"

namespace support {

using colim::ColimClass;
using colim::Cocone;
using colim::CoconeTail;
using colim::FinVector;
using colim::MapCategory;
using colim::OmegaChain;
using colim::Operator;
using colim::Scalar;
using colim::TailRule;

inline std::mt19937_64 rng_at(std::uint64_t root, std::uint64_t index) {
  return std::mt19937_64(colim::derive_seed(root, index));
}

inline double urand(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Scalar random_phase(std::mt19937_64& rng) {
  const double t = urand(rng, 0.0, 6.283185307179586);
  return {std::cos(t), std::sin(t)};
}

// Haar-ish unitary via Gram-Schmidt on a Gaussian matrix (one
// re-orthogonalization pass keeps it unitary to machine precision).
inline Operator random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Scalar{gauss(rng), gauss(rng)};
  Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(m).householderQ();
  return colim::detail::from_eigen(q);
}

inline Operator invert(const Operator& g) {
  return colim::detail::from_eigen(colim::detail::to_eigen(g).inverse());
}

// Random bounded map: a contraction scaled by a factor in [0, max_norm];
// every once in a while the zero map, which exercises r(0).
inline Operator random_bounded(int out, int in, std::mt19937_64& rng, double max_norm = 2.0) {
  if (rng() % 8 == 0) return Operator::zero(out, in);
  const double f = urand(rng, 0.0, max_norm);
  return Scalar{f, 0.0} * colim::random_contraction(out, in, rng());
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

// Map-by-map composite product; the independent check for the closed-form
// tail shortcuts in colim::composite.
inline Operator naive_composite(const OmegaChain& c, int m, int n) {
  Operator acc = Operator::identity(colim::stage_dim(c, m));
  for (int i = m; i < n; ++i) acc = colim::chain_map(c, i) * acc;
  return acc;
}

// Independent spectral-norm estimate: maximize |Gx| over random unit vectors
// with a little hill climbing via G'G applications.
inline double sampled_operator_norm(const Operator& g, std::mt19937_64& rng, int tries = 24) {
  const Operator gh = colim::adjoint(g);
  double best = 0.0;
  for (int t = 0; t < tries; ++t) {
    FinVector x = colim::random_vector(g.in_dim(), rng);
    for (int k = 0; k < 50; ++k) {
      const FinVector gx = g * x;
      best = std::max(best, colim::norm(gx) / colim::norm(x));
      FinVector next = gh * gx;
      const double nn = colim::norm(next);
      if (nn == 0.0) break;
      x = Scalar{1.0 / nn, 0.0} * next;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Chain generators
// ---------------------------------------------------------------------------

inline OmegaChain random_contraction_chain(std::mt19937_64& rng, bool identity_tail = false) {
  const int d0 = 1 + static_cast<int>(rng() % 4);
  const int d = 2 + static_cast<int>(rng() % 4);
  std::vector<Operator> maps{colim::random_contraction(d, d0, rng()),
                             colim::random_contraction(d, d, rng())};
  return OmegaChain({d0, d, d}, std::move(maps),
                    identity_tail ? TailRule::identity() : TailRule::repeat_last(),
                    MapCategory::contraction);
}

// Constant-dimension chain of bounded maps ending in a repeat_last tail.
inline OmegaChain random_bounded_chain(std::mt19937_64& rng, int dim, int prefix_maps) {
  std::vector<int> dims(static_cast<std::size_t>(prefix_maps) + 1, dim);
  std::vector<Operator> maps;
  maps.reserve(static_cast<std::size_t>(prefix_maps));
  for (int i = 0; i < prefix_maps; ++i) maps.push_back(random_bounded(dim, dim, rng));
  return OmegaChain(std::move(dims), std::move(maps), TailRule::repeat_last(),
                    MapCategory::bounded);
}

// Morphism out of `source` (constant dims, repeat_last tail): invertible
// components across the prefix, then scale * ratio^(n-P) * identity. The
// target chain is solved from the naturality squares, with one extra
// explicit map so its repeat_last tail starts where the scalar tail rules.
inline colim::ChainMorphism random_morphism(std::mt19937_64& rng, const OmegaChain& source) {
  const int d = source.prefix_dims().back();
  const int p = source.prefix_len();
  const Scalar s = Scalar{urand(rng, 0.5, 1.5), 0.0} * random_phase(rng);
  const Scalar t = Scalar{urand(rng, 0.4, 1.4), 0.0} * random_phase(rng);

  std::vector<Operator> comps;
  comps.reserve(static_cast<std::size_t>(p));
  for (int n = 0; n < p; ++n)
    comps.push_back(Operator::identity(d) +
                    Scalar{0.3, 0.0} * colim::random_contraction(d, d, rng()));

  std::vector<Operator> target_maps;
  target_maps.reserve(static_cast<std::size_t>(p) + 1);
  for (int n = 0; n + 1 < p; ++n)
    target_maps.push_back(comps[static_cast<std::size_t>(n + 1)] * source.prefix_maps()[static_cast<std::size_t>(n)] *
                          invert(comps[static_cast<std::size_t>(n)]));
  const Operator& last = source.prefix_maps().back();
  target_maps.push_back((s * last) * invert(comps.back()));
  target_maps.push_back(t * last);
  std::vector<int> target_dims(static_cast<std::size_t>(p) + 2, d);
  OmegaChain target(std::move(target_dims), std::move(target_maps), TailRule::repeat_last(),
                    MapCategory::bounded);
  return colim::ChainMorphism(source, target, std::move(comps),
                              colim::MorphismTail{s, t});
}

// ---------------------------------------------------------------------------
// Contraction cocone generators (three chain families)
// ---------------------------------------------------------------------------

struct ChainCocone {
  OmegaChain chain;
  Cocone cocone;
};

// Identity tail: anchor a random contraction at the end of the prefix and
// pull it back along composites.
inline ChainCocone identity_tail_cocone(std::mt19937_64& rng) {
  OmegaChain chain = random_contraction_chain(rng, /*identity_tail=*/true);
  const int q = chain.prefix_len();
  const int target = 1 + static_cast<int>(rng() % 4);
  const Operator anchor = colim::random_contraction(target, colim::stage_dim(chain, q), rng());
  std::vector<Operator> comps;
  for (int n = 0; n < q; ++n) comps.push_back(anchor * colim::composite(chain, n, q));
  comps.push_back(anchor);
  return {chain, Cocone(chain, target, std::move(comps), CoconeTail::repeat_last(),
                        MapCategory::contraction)};
}

// Scalar chain with a unimodular ratio; the cocone components precess with
// the conjugate phase. (With |ratio| < 1 the only contraction cocone is 0.)
inline ChainCocone scalar_phase_cocone(std::mt19937_64& rng) {
  const Scalar rho = random_phase(rng);
  OmegaChain chain({1, 1}, {colim::random_contraction(1, 1, rng())},
                   TailRule::scalar_geometric(rho), MapCategory::contraction);
  const int target = 1 + static_cast<int>(rng() % 4);
  const Operator anchor = colim::random_contraction(target, 1, rng());
  std::vector<Operator> comps{anchor * chain.prefix_maps()[0], anchor};
  return {chain, Cocone(chain, target, std::move(comps),
                        CoconeTail::scalar_geometric(std::conj(rho)), MapCategory::contraction)};
}

// repeat_last chain whose repeated map is normal with an exact unit
// eigenvalue block; the cocone factors through the fixed-subspace projection.
inline ChainCocone fixed_part_cocone(std::mt19937_64& rng) {
  const int d = 3 + static_cast<int>(rng() % 3);
  const int k = 1 + static_cast<int>(rng() % 2);
  const Operator v = random_unitary(d, rng);
  std::vector<Scalar> eig(static_cast<std::size_t>(d));
  std::vector<Scalar> proj(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    if (i < k) {
      eig[static_cast<std::size_t>(i)] = Scalar{1.0, 0.0};
      proj[static_cast<std::size_t>(i)] = Scalar{1.0, 0.0};
    } else {
      eig[static_cast<std::size_t>(i)] = Scalar{urand(rng, 0.1, 0.8), 0.0} * random_phase(rng);
      proj[static_cast<std::size_t>(i)] = Scalar{0.0, 0.0};
    }
  }
  const Operator m = v * Operator::diagonal(eig) * colim::adjoint(v);
  const Operator pi = v * Operator::diagonal(proj) * colim::adjoint(v);
  OmegaChain chain({d, d}, {m}, TailRule::repeat_last(), MapCategory::contraction);
  const int target = 1 + static_cast<int>(rng() % 4);
  const Operator alpha = colim::random_contraction(target, d, rng()) * pi;
  return {chain, Cocone(chain, target, {alpha}, CoconeTail::repeat_last(),
                        MapCategory::contraction)};
}

inline ChainCocone random_chain_cocone(std::mt19937_64& rng) {
  switch (rng() % 3) {
    case 0: return identity_tail_cocone(rng);
    case 1: return scalar_phase_cocone(rng);
    default: return fixed_part_cocone(rng);
  }
}

}  // namespace support
