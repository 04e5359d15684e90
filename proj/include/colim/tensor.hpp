#pragma once

// Tensoring a chain with a fixed finite-dimensional space H: the derived
// chain has stages H (x) K_i and maps 1 (x) e_i, and its colimit agrees with
// H (x) colim K_i. The comparison map is never materialized (its domain is a
// colimit); it is checked through the inner-product correspondence
//
//   <(A, h (x) x) | (C, h' (x) y)>  =  <h|h'> * lim_n <x_n|y_n>
//
// and through stage-level naturality in H.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "colim/chain.hpp"
#include "colim/colimit.hpp"
#include "colim/errors.hpp"
#include "colim/linalg.hpp"
#include "colim/report.hpp"

namespace colim {

struct TensorChain {
  int h_dim;
  OmegaChain base;
  OmegaChain derived;
};

inline TensorChain tensor_chain(int h_dim, const OmegaChain& base) {
  if (h_dim < 1) throw InvalidStructure("tensor_chain: h_dim must be positive");
  if (base.category() == MapCategory::bounded)
    throw CategoryViolation("tensor_chain: base chain must be a contraction or isometry chain");
  const Operator ih = Operator::identity(h_dim);

  std::vector<int> dims;
  dims.reserve(base.prefix_dims().size());
  for (int d : base.prefix_dims()) dims.push_back(h_dim * d);
  std::vector<Operator> maps;
  maps.reserve(base.prefix_maps().size());
  for (const Operator& e : base.prefix_maps()) maps.push_back(kronecker(ih, e));

  TailRule tail = base.tail();
  switch (base.tail().kind) {
    case TailKind::identity:
    case TailKind::repeat_last:
      break;
    case TailKind::embed_increment:
      tail = TailRule::embed_increment(h_dim * base.tail().block);
      break;
    case TailKind::scalar_geometric:
      if (h_dim > 1) {
        // stages become h_dim-dimensional; the repeated map is ratio * I
        dims.push_back(h_dim);
        maps.push_back(base.tail().ratio * ih);
        tail = TailRule::repeat_last();
      }
      break;
  }
  return {h_dim, base, OmegaChain(std::move(dims), std::move(maps), tail, base.category())};
}

// Class (A, h (x) x) of the derived chain.
inline ColimClass tensor_class(const TensorChain& tc, const FinVector& h, const ColimClass& c) {
  if (h.dim() != tc.h_dim) throw DimensionMismatch("tensor_class: wrong H dimension");
  check_class(tc.base, c);
  return inclusion(tc.derived, c.index, kronecker(h, c.rep));
}

// Sampled check that the derived-chain inner product factors as
// <h|h'> * (base-chain inner product).
inline CheckReport check_isometry(const TensorChain& tc, int samples, std::uint64_t seed,
                                  const ColimParams& params = {}) {
  CheckReport report;
  const int span = static_cast<int>(tc.base.prefix_dims().size()) + 3;
  for (int i = 0; i < samples; ++i) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const int a = static_cast<int>(rng() % static_cast<std::uint64_t>(span));
    const int c = static_cast<int>(rng() % static_cast<std::uint64_t>(span));
    const FinVector h = random_vector(tc.h_dim, rng);
    const FinVector hp = random_vector(tc.h_dim, rng);
    const ColimClass cx{a, random_vector(stage_dim(tc.base, a), rng)};
    const ColimClass cy{c, random_vector(stage_dim(tc.base, c), rng)};

    const LimitEstimate lhs = colim_inner(tc.derived, tensor_class(tc, h, cx),
                                          tensor_class(tc, hp, cy), params);
    const LimitEstimate base = colim_inner(tc.base, cx, cy, params);
    const Scalar factor = inner(h, hp);
    const double residual = std::abs(lhs.value - factor * base.value);
    const double allowed = lhs.error + std::abs(factor) * base.error + params.tol;
    report.add("sample_" + std::to_string(i), residual, residual <= allowed);
  }
  return report;
}

// Naturality in H: for f : H -> H', mapping at stage level and then taking
// colimit inner products agrees with evaluating <f h | f h'> against the base
// limit; and the stage-level maps f (x) 1 commute with pushing forward.
inline CheckReport check_naturality(const Operator& f, const OmegaChain& base, int samples,
                                    std::uint64_t seed, const ColimParams& params = {}) {
  CheckReport report;
  const TensorChain tc = tensor_chain(f.in_dim(), base);
  const TensorChain tcp = tensor_chain(f.out_dim(), base);
  const int span = static_cast<int>(base.prefix_dims().size()) + 3;
  for (int i = 0; i < samples; ++i) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const int a = static_cast<int>(rng() % static_cast<std::uint64_t>(span));
    const int c = static_cast<int>(rng() % static_cast<std::uint64_t>(span));
    const FinVector h1 = random_vector(f.in_dim(), rng);
    const FinVector h2 = random_vector(f.in_dim(), rng);
    const ColimClass cx{a, random_vector(stage_dim(base, a), rng)};
    const ColimClass cy{c, random_vector(stage_dim(base, c), rng)};

    // route 1: apply f at stage level, then evaluate in the H'-derived chain
    const LimitEstimate lhs = colim_inner(tcp.derived, tensor_class(tcp, f * h1, cx),
                                          tensor_class(tcp, f * h2, cy), params);
    // route 2: evaluate in H (x) colim K: <f h1 | f h2> * lim <x_n|y_n>
    const LimitEstimate b = colim_inner(base, cx, cy, params);
    const Scalar factor = inner(f * h1, f * h2);
    const double residual = std::abs(lhs.value - factor * b.value);
    const double allowed = lhs.error + std::abs(factor) * b.error + params.tol;
    report.add("inner_sample_" + std::to_string(i), residual, residual <= allowed);

    // stage-level square: (f (x) 1) after pushing == pushing after (f (x) 1)
    const int m = a + 1 + static_cast<int>(rng() % 3);
    const FinVector hx = kronecker(h1, cx.rep);
    const FinVector via_push = kronecker(f, Operator::identity(stage_dim(base, m))) *
                               push(tc.derived, ColimClass{a, hx}, m).rep;
    const FinVector via_map = push(tcp.derived,
                                   ColimClass{a, kronecker(f, Operator::identity(stage_dim(base, a))) * hx},
                                   m)
                                  .rep;
    const double square = max_abs_diff(via_push, via_map);
    report.add("square_sample_" + std::to_string(i), square, square <= params.tol);
  }
  return report;
}

}  // namespace colim
