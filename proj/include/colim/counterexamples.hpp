#pragma once

// The two standard failures of colimit universality against merely bounded
// cocones, and the bounded/unbounded dichotomy check.
//
// Scaling: stages C with connecting maps (1/2). The colimit is the zero
// space, yet scaling by 2^n is a perfectly good (non-zero) cocone of bounded
// maps, so no bounded map out of the colimit can reproduce it.
//
// Embedding: stages C^(n+1) with zero-padding inclusions. The colimit is an
// infinite separable space; weighting the k-th coordinate by k gives a
// cocone whose induced map has restriction norms 1, 2, 3, ... without bound.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "colim/chain.hpp"
#include "colim/colimit.hpp"
#include "colim/linalg.hpp"

namespace colim {

inline OmegaChain scaling_chain() {
  return OmegaChain({1}, {}, TailRule::scalar_geometric(Scalar{0.5, 0.0}),
                    MapCategory::contraction);
}

inline Cocone scaling_cocone() {
  return Cocone(scaling_chain(), 1, {Operator(1, 1, {Scalar{1.0, 0.0}})},
                CoconeTail::scalar_geometric(Scalar{2.0, 0.0}), MapCategory::bounded);
}

inline OmegaChain embedding_chain() {
  return OmegaChain({1}, {}, TailRule::embed_increment(1), MapCategory::isometry);
}

// Weight coordinate k (1-based) by k; the target truncates the colimit at
// `depth` coordinates, which is enough to watch the restriction norms grow.
inline Cocone embedding_cocone(int depth) {
  if (depth < 1) throw InvalidStructure("embedding_cocone: depth must be >= 1");
  std::vector<Scalar> weights;
  weights.reserve(static_cast<std::size_t>(depth));
  for (int k = 1; k <= depth; ++k) weights.push_back(Scalar{static_cast<double>(k), 0.0});
  return Cocone(embedding_chain(), depth, {}, CoconeTail::coordinate_weights(std::move(weights)),
                MapCategory::bounded);
}

struct DichotomyReport {
  double sup_norm = 0.0;                  // max component norm over the window
  bool growing = false;                   // strictly increasing over the last half
  std::vector<double> restriction_norms;  // per-stage operator norms of alpha_n
  double max_stage_ratio = 0.0;           // max |alpha_n x| / |x| over samples
  double max_colim_excess = 0.0;          // max |alpha_n x| - (colim norm + radius)
  bool zero_norm_paradox = false;         // nonzero output on a zero-norm class
  bool contraction_ok = true;             // bound 1 holds (contraction cocones only)
  bool bounded_in_window = true;          // no growth flag, no paradox
};

inline DichotomyReport dichotomy_report(const Cocone& cocone, int depth,
                                        std::uint64_t seed = 42,
                                        const ColimParams& params = {}) {
  if (depth < 1) throw InvalidStructure("dichotomy_report: depth must be >= 1");
  DichotomyReport rep;
  const GlobalBound gb = global_bound(cocone, depth);
  rep.sup_norm = gb.sup_norm;
  rep.growing = gb.growing;
  rep.restriction_norms = gb.norms;

  const int samples = std::min(depth, 16);
  for (int i = 0; i < samples; ++i) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const int n = static_cast<int>(rng() % static_cast<std::uint64_t>(depth));
    const FinVector x = random_vector(stage_dim(cocone.chain(), n), rng);
    const ColimClass c = inclusion(cocone.chain(), n, x);
    const FinVector out = induced_apply(cocone, c);
    rep.max_stage_ratio = std::max(rep.max_stage_ratio, norm(out) / norm(x));
    const NormEstimate cn = colim_norm(cocone.chain(), c, params);
    if (cn.value + cn.error < params.zero_threshold && norm(out) > params.tol)
      rep.zero_norm_paradox = true;
    else
      rep.max_colim_excess = std::max(rep.max_colim_excess, norm(out) - cn.value - cn.error);
  }
  if (cocone.category() == MapCategory::contraction)
    rep.contraction_ok = rep.sup_norm <= 1.0 + params.tol && rep.max_colim_excess <= params.tol &&
                         !rep.zero_norm_paradox;
  rep.bounded_in_window = !rep.growing && !rep.zero_norm_paradox;
  return rep;
}

}  // namespace colim
