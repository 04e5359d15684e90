#pragma once

// Normalisation of omega-chains of bounded maps: divide each connecting map
// c_n by r(c_n), where r is a positive function dominating the operator
// norm. The result is a contraction chain, isomorphic to the original via
// the scalar components eta_n = prod_{i<n} 1/r(c_i). Morphisms rescale as
// (N alpha)_n = alpha_n * prod_{i<n} r(c_i)/r(d_i).
//
// eta is kept in log form; products like 2^-n underflow long before the
// chain prefix machinery gives out.
//
// Note: naive map-wise normalisation b -> b/|b| is not functorial (see
// naive_normalization_witness); normalising whole chains is.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "colim/chain.hpp"
#include "colim/errors.hpp"
#include "colim/linalg.hpp"
#include "colim/report.hpp"

namespace colim {

enum class RVariant {
  unit_at_zero,     // r(0) = 1, r(b) = |b| otherwise
  continuous_clamp  // r(b) = 1 on contractions, |b| otherwise
};

inline const char* to_string(RVariant v) {
  return v == RVariant::unit_at_zero ? "unit_at_zero" : "continuous_clamp";
}

inline double r_value(RVariant variant, const Operator& b, double classify_tol = 1e-9) {
  const double nrm = operator_norm(b);
  if (variant == RVariant::unit_at_zero) return nrm == 0.0 ? 1.0 : nrm;
  return nrm <= 1.0 + classify_tol ? 1.0 : nrm;
}

struct EtaRule {
  std::vector<double> prefix_log;  // eta_log at stages 0..P
  double tail_log_step = 0.0;      // -log r of the repeated tail map
};

struct NormalizedChain {
  OmegaChain chain;
  EtaRule eta;
};

inline double eta_log(const NormalizedChain& nc, int n) {
  if (n < 0) throw InvalidStructure("eta_log: negative stage");
  const int p = static_cast<int>(nc.eta.prefix_log.size()) - 1;
  if (n <= p) return nc.eta.prefix_log[static_cast<std::size_t>(n)];
  return nc.eta.prefix_log.back() + (n - p) * nc.eta.tail_log_step;
}

inline double eta_value(const NormalizedChain& nc, int n) { return std::exp(eta_log(nc, n)); }

inline NormalizedChain normalize_chain(const OmegaChain& c, RVariant variant,
                                       double classify_tol = 1e-9) {
  const int p = c.prefix_len();
  std::vector<Operator> maps;
  maps.reserve(static_cast<std::size_t>(p));
  EtaRule eta;
  eta.prefix_log.reserve(static_cast<std::size_t>(p) + 1);
  eta.prefix_log.push_back(0.0);  // eta_0 = 1
  for (int i = 0; i < p; ++i) {
    const Operator& m = c.prefix_maps()[static_cast<std::size_t>(i)];
    const double r = r_value(variant, m, classify_tol);
    maps.push_back(Scalar{1.0 / r, 0.0} * m);
    eta.prefix_log.push_back(eta.prefix_log.back() - std::log(r));
  }

  TailRule tail = c.tail();
  double r_tail = 1.0;
  switch (c.tail().kind) {
    case TailKind::identity:
    case TailKind::embed_increment:
      // structural isometries; unit norm by construction
      r_tail = 1.0;
      break;
    case TailKind::scalar_geometric: {
      r_tail = r_value(variant, Operator(1, 1, {c.tail().ratio}), classify_tol);
      tail = TailRule::scalar_geometric(c.tail().ratio * Scalar{1.0 / r_tail, 0.0});
      break;
    }
    case TailKind::repeat_last:
      // the tail repeats the (already normalized) last prefix map
      r_tail = r_value(variant, c.prefix_maps().back(), classify_tol);
      break;
  }
  eta.tail_log_step = -std::log(r_tail);

  return {OmegaChain(c.prefix_dims(), std::move(maps), tail, MapCategory::contraction),
          std::move(eta)};
}

inline ChainMorphism normalize_morphism(const ChainMorphism& alpha, RVariant variant,
                                        double classify_tol = 1e-9) {
  const NormalizedChain nc = normalize_chain(alpha.source(), variant, classify_tol);
  const NormalizedChain nd = normalize_chain(alpha.target(), variant, classify_tol);
  // log of prod_{i<n} r(c_i)/r(d_i)
  auto factor_log = [&](int n) { return eta_log(nd, n) - eta_log(nc, n); };

  const int p = std::max({alpha.prefix_len(), alpha.source().prefix_len(),
                          alpha.target().prefix_len()});
  std::vector<Operator> comps;
  comps.reserve(static_cast<std::size_t>(p));
  for (int n = 0; n < p; ++n)
    comps.push_back(Scalar{std::exp(factor_log(n)), 0.0} * morphism_component(alpha, n));

  MorphismTail tail;
  tail.ratio = alpha.tail().ratio *
               Scalar{std::exp(nd.eta.tail_log_step - nc.eta.tail_log_step), 0.0};
  tail.scale = alpha.tail().scale *
               detail::pow_int(alpha.tail().ratio, p - alpha.prefix_len()) *
               Scalar{std::exp(factor_log(p)), 0.0};
  return ChainMorphism(nc.chain, nd.chain, std::move(comps), tail);
}

// eta as a natural transformation: (N alpha)_n * eta^C_n = eta^D_n * alpha_n.
inline CheckReport check_eta_naturality(const ChainMorphism& alpha, RVariant variant, int depth,
                                        double tol = 1e-10) {
  if (depth < 1) throw InvalidStructure("check_eta_naturality: depth must be >= 1");
  const NormalizedChain nc = normalize_chain(alpha.source(), variant);
  const NormalizedChain nd = normalize_chain(alpha.target(), variant);
  const ChainMorphism na = normalize_morphism(alpha, variant);
  CheckReport report;
  for (int n = 0; n < depth; ++n) {
    const Operator lhs = Scalar{eta_value(nc, n), 0.0} * morphism_component(na, n);
    const Operator rhs = Scalar{eta_value(nd, n), 0.0} * morphism_component(alpha, n);
    const double r = max_abs_diff(lhs, rhs);
    report.add("eta_square_" + std::to_string(n), r, r <= tol);
  }
  return report;
}

struct NaiveNormalizationWitness {
  Operator b;
  Operator b_prime;
  Operator composed_then_normalized;   // (b' o b) / |b' o b|
  Operator normalized_then_composed;   // (b'/|b'|) o (b/|b|)
  double residual;
};

// Concrete pair showing b -> b/|b| is not a functor: with b = diag(1, 1/2)
// and b' = diag(1/2, 1) the composite is (1/2) I, which normalises to I,
// while the normalised factors compose to (1/2) I.
inline NaiveNormalizationWitness naive_normalization_witness() {
  const Operator b = Operator::diagonal({Scalar{1.0, 0.0}, Scalar{0.5, 0.0}});
  const Operator bp = Operator::diagonal({Scalar{0.5, 0.0}, Scalar{1.0, 0.0}});
  const Operator comp = bp * b;
  const Operator lhs = Scalar{1.0 / operator_norm(comp), 0.0} * comp;
  const Operator rhs = (Scalar{1.0 / operator_norm(bp), 0.0} * bp) *
                       (Scalar{1.0 / operator_norm(b), 0.0} * b);
  return {b, bp, lhs, rhs, max_abs_diff(lhs, rhs)};
}

}  // namespace colim
