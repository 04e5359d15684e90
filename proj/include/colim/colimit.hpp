#pragma once

// The chain colimit at desk scale. Vectors of the colimit are equivalence
// classes (stage, representative); the limit inner product is the limit of
// <x_n|y_n> along pushed representatives. Estimates carry a status:
//
//   exact_stabilized  the tail rule makes the sequence eventually constant
//                     (isometry chains, identity / embed tails, scalar
//                     geometric tails); error radius 0
//   certified         repeat_last with an exactly diagonal repeated map; the
//                     geometric tail yields a rigorous radius
//   heuristic         general repeat_last iteration; the radius is the gap
//                     inequality bound across the stopping window and the
//                     true infimum may lie beyond it
//
// Stopping rule for iterated tails: stop once the norm-squared drop across a
// window of `window` stages falls below `window_drop`, capped at `depth`
// iterations.

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

enum class EstimateStatus { exact_stabilized, certified, heuristic };

inline const char* to_string(EstimateStatus s) {
  switch (s) {
    case EstimateStatus::exact_stabilized: return "exact_stabilized";
    case EstimateStatus::certified: return "certified";
    default: return "heuristic";
  }
}

struct LimitEstimate {
  Scalar value{0.0, 0.0};
  double error = 0.0;
  EstimateStatus status = EstimateStatus::exact_stabilized;
  int depth_used = 0;  // stage at which the value was read
};

struct NormEstimate {
  double value = 0.0;
  double error = 0.0;
  EstimateStatus status = EstimateStatus::exact_stabilized;
  int depth_used = 0;
};

struct ColimParams {
  int depth = 512;                    // max tail iterations
  int window = 8;                     // stopping window length
  double tol = 1e-9;
  double window_drop = 1e-12;         // norm-squared drop threshold
  double zero_threshold = 1e-8;       // zero-class decision level
  double monotonicity_slack = 1e-10;  // allowed norm increase per step
};

struct ColimClass {
  int index;
  FinVector rep;
};

inline void check_class(const OmegaChain& chain, const ColimClass& c) {
  if (c.index < 0) throw InvalidStructure("class stage index must be >= 0");
  if (c.rep.dim() != stage_dim(chain, c.index))
    throw DimensionMismatch("class representative has dimension " + std::to_string(c.rep.dim()) +
                            " but stage " + std::to_string(c.index) + " has dimension " +
                            std::to_string(stage_dim(chain, c.index)));
}

inline ColimClass inclusion(const OmegaChain& chain, int n, const FinVector& x) {
  ColimClass c{n, x};
  check_class(chain, c);
  return c;
}

inline ColimClass push(const OmegaChain& chain, const ColimClass& c, int m) {
  check_class(chain, c);
  if (m < c.index)
    throw InvalidStructure("push: target stage " + std::to_string(m) + " is below class stage " +
                           std::to_string(c.index));
  if (m == c.index) return c;
  return ColimClass{m, composite(chain, c.index, m) * c.rep};
}

inline ColimClass class_combine(const OmegaChain& chain, Scalar a, const ColimClass& c1, Scalar b,
                                const ColimClass& c2) {
  const int j = std::max(c1.index, c2.index);
  return ColimClass{j, a * push(chain, c1, j).rep + b * push(chain, c2, j).rep};
}

namespace detail {

inline bool exactly_diagonal(const Operator& m) {
  if (m.in_dim() != m.out_dim()) return false;
  for (int i = 0; i < m.out_dim(); ++i)
    for (int j = 0; j < m.in_dim(); ++j)
      if (i != j && m(i, j) != Scalar{0.0, 0.0}) return false;
  return true;
}

}  // namespace detail

inline LimitEstimate colim_inner(const OmegaChain& chain, const ColimClass& c1,
                                 const ColimClass& c2, const ColimParams& params = {}) {
  if (chain.category() == MapCategory::bounded)
    throw CategoryViolation(
        "colim_inner: chain declared bounded; norm sequences are not monotone and no limit is defined");
  if (params.depth < 1 || params.window < 1)
    throw InvalidStructure("colim_inner: depth and window must be >= 1");
  check_class(chain, c1);
  check_class(chain, c2);

  const int m0 = std::max(c1.index, c2.index);
  FinVector x = push(chain, c1, m0).rep;
  FinVector y = push(chain, c2, m0).rep;

  // isometry chains: every connecting map preserves inner products
  if (chain.category() == MapCategory::isometry)
    return {inner(x, y), 0.0, EstimateStatus::exact_stabilized, m0};

  int stage = m0;
  double nx = norm(x), ny = norm(y);
  auto advance = [&](const Operator& e) {
    x = e * x;
    y = e * y;
    const double nx_next = norm(x), ny_next = norm(y);
    if (nx_next > nx + params.monotonicity_slack || ny_next > ny + params.monotonicity_slack)
      throw CategoryViolation(
          "colim_inner: representative norm increased along a declared contraction chain at stage " +
          std::to_string(stage) + "; the chain is misdeclared");
    nx = nx_next;
    ny = ny_next;
  };

  while (stage < chain.prefix_len()) {
    advance(chain_map(chain, stage));
    ++stage;
  }

  switch (chain.tail().kind) {
    case TailKind::identity:
    case TailKind::embed_increment:
      // tail maps preserve representatives / inner products exactly
      return {inner(x, y), 0.0, EstimateStatus::exact_stabilized, stage};
    case TailKind::scalar_geometric: {
      const double r = std::abs(chain.tail().ratio);
      if (r > 1.0 + 1e-12)
        throw CategoryViolation("colim_inner: scalar tail ratio has modulus > 1 on a contraction chain");
      if (r >= 1.0 - 1e-12)  // unimodular within tolerance: sequence constant
        return {inner(x, y), 0.0, EstimateStatus::exact_stabilized, stage};
      return {Scalar{0.0, 0.0}, 0.0, EstimateStatus::exact_stabilized, stage};
    }
    case TailKind::repeat_last:
      break;
  }

  const Operator& m = chain.prefix_maps().back();
  if (classify(m, 1e-12).tag == MapCategory::isometry)
    return {inner(x, y), 0.0, EstimateStatus::exact_stabilized, stage};

  std::vector<double> hx{norm2(x)}, hy{norm2(y)};
  int it = 0;
  while (true) {
    if (it >= params.window &&
        hx[static_cast<std::size_t>(it - params.window)] - hx[static_cast<std::size_t>(it)] <
            params.window_drop &&
        hy[static_cast<std::size_t>(it - params.window)] - hy[static_cast<std::size_t>(it)] <
            params.window_drop)
      break;
    if (it >= params.depth) break;
    advance(m);
    ++stage;
    ++it;
    hx.push_back(norm2(x));
    hy.push_back(norm2(y));
  }
  const int lo = std::max(0, it - params.window);
  const double dx = std::max(0.0, hx[static_cast<std::size_t>(lo)] - hx[static_cast<std::size_t>(it)]);
  const double dy = std::max(0.0, hy[static_cast<std::size_t>(lo)] - hy[static_cast<std::size_t>(it)]);

  double err = std::sqrt(dx * dy);
  EstimateStatus status = EstimateStatus::heuristic;
  if (detail::exactly_diagonal(m)) {
    // diagonal repeated map: the strictly contracting part decays at least
    // geometrically, so the window drop bounds the remaining tail
    double rho = 0.0;
    for (int i = 0; i < m.in_dim(); ++i) {
      const double a = std::abs(m(i, i));
      if (a < 1.0 - 1e-12) rho = std::max(rho, a);
    }
    const double q = std::pow(rho, 2.0 * (it - lo));
    err = (q / (1.0 - q)) * std::sqrt(dx * dy);
    status = EstimateStatus::certified;
  }
  return {inner(x, y), err, status, stage};
}

inline NormEstimate colim_norm(const OmegaChain& chain, const ColimClass& c,
                               const ColimParams& params = {}) {
  const LimitEstimate est = colim_inner(chain, c, c, params);
  const double v = std::max(0.0, est.value.real());
  const double value = std::sqrt(v);
  const double lo = std::sqrt(std::max(0.0, v - est.error));
  const double hi = std::sqrt(v + est.error);
  return {value, std::max(hi - value, value - lo), est.status, est.depth_used};
}

enum class ZeroVerdict { zero, nonzero, indeterminate };

inline const char* to_string(ZeroVerdict v) {
  switch (v) {
    case ZeroVerdict::zero: return "zero";
    case ZeroVerdict::nonzero: return "nonzero";
    default: return "indeterminate";
  }
}

inline ZeroVerdict zero_class_verdict(const OmegaChain& chain, const ColimClass& c,
                                      const ColimParams& params = {}) {
  const NormEstimate n = colim_norm(chain, c, params);
  if (n.value + n.error < params.zero_threshold) return ZeroVerdict::zero;
  if (n.status == EstimateStatus::heuristic && n.value - n.error < params.zero_threshold)
    return ZeroVerdict::indeterminate;
  return ZeroVerdict::nonzero;
}

inline bool is_zero_class(const OmegaChain& chain, const ColimClass& c,
                          const ColimParams& params = {}) {
  switch (zero_class_verdict(chain, c, params)) {
    case ZeroVerdict::zero: return true;
    case ZeroVerdict::nonzero: return false;
    default:
      throw IndeterminateResult(
          "is_zero_class: heuristic norm estimate straddles the zero threshold");
  }
}

// ---------------------------------------------------------------------------
// Cocones and the induced universal map
// ---------------------------------------------------------------------------

enum class CoconeTailKind { repeat_last, scalar_geometric, coordinate_weights };

inline const char* to_string(CoconeTailKind k) {
  switch (k) {
    case CoconeTailKind::repeat_last: return "repeat_last";
    case CoconeTailKind::scalar_geometric: return "scalar_geometric";
    default: return "coordinate_weights";
  }
}

struct CoconeTail {
  CoconeTailKind kind = CoconeTailKind::repeat_last;
  Scalar ratio{1.0, 0.0};        // scalar_geometric
  std::vector<Scalar> weights;   // coordinate_weights, length == target_dim

  static CoconeTail repeat_last() { return {CoconeTailKind::repeat_last, {1.0, 0.0}, {}}; }
  static CoconeTail scalar_geometric(Scalar ratio) {
    if (!is_finite(ratio)) throw NotFinite("CoconeTail: non-finite ratio");
    return {CoconeTailKind::scalar_geometric, ratio, {}};
  }
  static CoconeTail coordinate_weights(std::vector<Scalar> weights) {
    for (const Scalar& w : weights)
      if (!is_finite(w)) throw NotFinite("CoconeTail: non-finite weight");
    return {CoconeTailKind::coordinate_weights, {1.0, 0.0}, std::move(weights)};
  }
};

class Cocone {
 public:
  Cocone(OmegaChain chain, int target_dim, std::vector<Operator> prefix_components,
         CoconeTail tail, MapCategory category)
      : chain_(std::move(chain)),
        target_dim_(target_dim),
        prefix_(std::move(prefix_components)),
        tail_(std::move(tail)),
        category_(category) {
    if (target_dim_ < 1) throw InvalidStructure("Cocone: target dimension must be positive");
    if (category_ == MapCategory::isometry)
      throw InvalidStructure("Cocone: category must be contraction or bounded");
    const int p = static_cast<int>(prefix_.size());
    for (int n = 0; n < p; ++n)
      if (prefix_[static_cast<std::size_t>(n)].in_dim() != stage_dim(chain_, n) ||
          prefix_[static_cast<std::size_t>(n)].out_dim() != target_dim_)
        throw InvalidStructure("Cocone: component " + std::to_string(n) +
                               " does not match stage/target dimensions");
    if (tail_.kind == CoconeTailKind::coordinate_weights) {
      if (static_cast<int>(tail_.weights.size()) != target_dim_)
        throw InvalidStructure("Cocone: coordinate weights must have target_dim entries");
    } else {
      if (prefix_.empty())
        throw InvalidStructure("Cocone: repeating tails need at least one explicit component");
      // repeating components require a constant stage dimension from P-1 on
      if (chain_.tail().kind == TailKind::embed_increment)
        throw InvalidStructure("Cocone: repeating tails cannot follow a growing chain");
      const int from = p - 1;
      const int probe = static_cast<int>(chain_.prefix_dims().size()) + 1;
      for (int n = from; n <= std::max(from, probe); ++n)
        if (stage_dim(chain_, n) != stage_dim(chain_, from))
          throw InvalidStructure("Cocone: repeating tails need constant stage dimensions beyond the prefix");
    }
  }

  const OmegaChain& chain() const { return chain_; }
  int target_dim() const { return target_dim_; }
  const std::vector<Operator>& prefix_components() const { return prefix_; }
  const CoconeTail& tail() const { return tail_; }
  MapCategory category() const { return category_; }
  int prefix_len() const { return static_cast<int>(prefix_.size()); }

 private:
  OmegaChain chain_;
  int target_dim_;
  std::vector<Operator> prefix_;
  CoconeTail tail_;
  MapCategory category_;
};

inline Operator cocone_component(const Cocone& a, int n) {
  if (n < 0) throw InvalidStructure("cocone_component: negative stage");
  const int p = a.prefix_len();
  if (n < p) return a.prefix_components()[static_cast<std::size_t>(n)];
  switch (a.tail().kind) {
    case CoconeTailKind::repeat_last: return a.prefix_components().back();
    case CoconeTailKind::scalar_geometric:
      return detail::pow_int(a.tail().ratio, n - p + 1) * a.prefix_components().back();
    default: {
      const int sd = stage_dim(a.chain(), n);
      Operator comp = Operator::zero(a.target_dim(), sd);
      std::vector<Scalar> e(comp.entries());
      for (int k = 0; k < std::min(sd, a.target_dim()); ++k)
        e[static_cast<std::size_t>(k) * sd + k] = a.tail().weights[static_cast<std::size_t>(k)];
      return Operator(a.target_dim(), sd, std::move(e));
    }
  }
}

struct CoconeReport {
  bool ok = true;
  double max_component_norm = 0.0;
  std::vector<CheckItem> items;
};

// Compatibility squares alpha_n = alpha_{n+1} o e_n for n < depth, plus the
// maximum component norm seen (and the contraction bound when declared).
inline CoconeReport validate_cocone(const Cocone& a, int depth, double tol = 1e-9) {
  if (depth < 1) throw InvalidStructure("validate_cocone: depth must be >= 1");
  CoconeReport rep;
  Operator comp = cocone_component(a, 0);
  for (int n = 0; n < depth; ++n) {
    Operator next = cocone_component(a, n + 1);
    const double r = max_abs_diff(comp, next * chain_map(a.chain(), n));
    const bool pass = r <= tol;
    rep.items.push_back({"cocone_square_" + std::to_string(n), r, pass, ""});
    rep.ok = rep.ok && pass;
    rep.max_component_norm = std::max(rep.max_component_norm, operator_norm(comp));
    comp = std::move(next);
  }
  if (a.category() == MapCategory::contraction) {
    const bool pass = rep.max_component_norm <= 1.0 + tol;
    rep.items.push_back({"components_contractive", rep.max_component_norm, pass, ""});
    rep.ok = rep.ok && pass;
  }
  return rep;
}

inline FinVector induced_apply(const Cocone& a, const ColimClass& c) {
  check_class(a.chain(), c);
  const Operator here = cocone_component(a, c.index);
  // cheap compatibility probe at the class's own stage
  const double r =
      max_abs_diff(here, cocone_component(a, c.index + 1) * chain_map(a.chain(), c.index));
  if (r > 1e-6)
    throw InvalidCocone("induced_apply: cocone condition fails at stage " +
                        std::to_string(c.index) + " (residual " + std::to_string(r) + ")");
  return here * c.rep;
}

struct GlobalBound {
  double sup_norm = 0.0;
  bool growing = false;
  std::vector<double> norms;
};

inline GlobalBound global_bound(const Cocone& a, int depth) {
  if (depth < 1) throw InvalidStructure("global_bound: depth must be >= 1");
  GlobalBound gb;
  gb.norms.reserve(static_cast<std::size_t>(depth));
  for (int n = 0; n < depth; ++n) {
    gb.norms.push_back(operator_norm(cocone_component(a, n)));
    gb.sup_norm = std::max(gb.sup_norm, gb.norms.back());
  }
  const int start = depth / 2;
  bool g = start + 1 < depth;
  for (int n = start; n + 1 < depth; ++n)
    if (!(gb.norms[static_cast<std::size_t>(n + 1)] > gb.norms[static_cast<std::size_t>(n)]))
      g = false;
  gb.growing = g;
  return gb;
}

}  // namespace colim
