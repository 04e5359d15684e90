#pragma once

// Omega-chains of finite-dimensional Hilbert spaces
//
//     H_0 --e_0--> H_1 --e_1--> H_2 --> ...
//
// finitely presented as an explicit prefix (stage dimensions + connecting
// maps) and a symbolic tail rule for everything beyond. Stage indices are
// 0-based throughout. Chain morphisms carry an explicit component prefix
// and continue as scale * ratio^(n-P) * identity.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "colim/errors.hpp"
#include "colim/linalg.hpp"
#include "colim/report.hpp"

namespace colim {

// ---------------------------------------------------------------------------
// Tail rules
// ---------------------------------------------------------------------------

enum class TailKind { repeat_last, identity, scalar_geometric, embed_increment };

inline const char* to_string(TailKind k) {
  switch (k) {
    case TailKind::repeat_last: return "repeat_last";
    case TailKind::identity: return "identity";
    case TailKind::scalar_geometric: return "scalar_geometric";
    default: return "embed_increment";
  }
}

struct TailRule {
  TailKind kind = TailKind::identity;
  Scalar ratio{0.0, 0.0};  // scalar_geometric only
  int block = 1;           // embed_increment: dimension growth per stage

  static TailRule repeat_last() { return {TailKind::repeat_last, {0.0, 0.0}, 1}; }
  static TailRule identity() { return {TailKind::identity, {0.0, 0.0}, 1}; }
  static TailRule scalar_geometric(Scalar ratio) {
    if (!is_finite(ratio)) throw NotFinite("TailRule: non-finite ratio");
    return {TailKind::scalar_geometric, ratio, 1};
  }
  static TailRule embed_increment(int block = 1) {
    if (block < 1) throw InvalidStructure("TailRule: embed block must be >= 1");
    return {TailKind::embed_increment, {0.0, 0.0}, block};
  }
};

// ---------------------------------------------------------------------------
// OmegaChain
// ---------------------------------------------------------------------------

class OmegaChain {
 public:
  OmegaChain(std::vector<int> prefix_dims, std::vector<Operator> prefix_maps, TailRule tail,
             MapCategory category)
      : prefix_dims_(std::move(prefix_dims)),
        prefix_maps_(std::move(prefix_maps)),
        tail_(tail),
        category_(category) {
    if (prefix_dims_.empty()) throw InvalidStructure("OmegaChain: at least one prefix dimension");
    for (int d : prefix_dims_)
      if (d < 1) throw InvalidStructure("OmegaChain: stage dimensions must be positive");
    if (prefix_maps_.size() + 1 != prefix_dims_.size())
      throw InvalidStructure("OmegaChain: need exactly one map between adjacent prefix stages");
    for (std::size_t i = 0; i < prefix_maps_.size(); ++i)
      if (prefix_maps_[i].in_dim() != prefix_dims_[i] ||
          prefix_maps_[i].out_dim() != prefix_dims_[i + 1])
        throw InvalidStructure("OmegaChain: prefix map " + std::to_string(i) +
                               " does not match adjacent stage dimensions");
    switch (tail_.kind) {
      case TailKind::repeat_last:
        if (prefix_maps_.empty() ||
            prefix_maps_.back().in_dim() != prefix_maps_.back().out_dim())
          throw InvalidStructure("OmegaChain: repeat_last needs a square last prefix map");
        break;
      case TailKind::scalar_geometric:
        for (int d : prefix_dims_)
          if (d != 1) throw InvalidStructure("OmegaChain: scalar_geometric needs 1-dim stages");
        break;
      case TailKind::embed_increment:
        if (prefix_dims_.back() % tail_.block != 0)
          throw InvalidStructure("OmegaChain: embed block must divide the last prefix dimension");
        break;
      case TailKind::identity:
        break;
    }
  }

  const std::vector<int>& prefix_dims() const { return prefix_dims_; }
  const std::vector<Operator>& prefix_maps() const { return prefix_maps_; }
  const TailRule& tail() const { return tail_; }
  MapCategory category() const { return category_; }

  // Index of the first tail map (== number of explicit maps).
  int prefix_len() const { return static_cast<int>(prefix_maps_.size()); }

 private:
  std::vector<int> prefix_dims_;
  std::vector<Operator> prefix_maps_;
  TailRule tail_;
  MapCategory category_;
};

inline int stage_dim(const OmegaChain& c, int n) {
  if (n < 0) throw InvalidStructure("stage_dim: negative stage");
  const int k = static_cast<int>(c.prefix_dims().size());
  if (n < k) return c.prefix_dims()[static_cast<std::size_t>(n)];
  const int last = c.prefix_dims().back();
  if (c.tail().kind == TailKind::embed_increment) return last + c.tail().block * (n - (k - 1));
  if (c.tail().kind == TailKind::scalar_geometric) return 1;
  return last;
}

namespace detail {

// Zero-padding isometry from b*m to b*(m+1) coordinates, laid out so it
// equals kron(I_b, pad_{m -> m+1}).
inline Operator block_pad(int block, int m_from, int m_to) {
  const int in = block * m_from;
  const int out = block * m_to;
  std::vector<Scalar> e(static_cast<std::size_t>(out) * in, Scalar{0.0, 0.0});
  for (int i = 0; i < block; ++i)
    for (int kk = 0; kk < m_from; ++kk)
      e[static_cast<std::size_t>(i * m_to + kk) * in + (i * m_from + kk)] = Scalar{1.0, 0.0};
  return Operator(out, in, std::move(e));
}

inline Scalar pow_int(Scalar z, int k) {
  Scalar r{1.0, 0.0};
  while (k > 0) {
    if (k & 1) r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

inline Operator pow_int(Operator m, int k) {
  if (m.in_dim() != m.out_dim()) throw DimensionMismatch("pow_int: square operator required");
  Operator r = Operator::identity(m.in_dim());
  while (k > 0) {
    if (k & 1) r = m * r;
    m = m * m;
    k >>= 1;
  }
  return r;
}

}  // namespace detail

inline Operator chain_map(const OmegaChain& c, int n) {
  if (n < 0) throw InvalidStructure("chain_map: negative stage");
  if (n < c.prefix_len()) return c.prefix_maps()[static_cast<std::size_t>(n)];
  switch (c.tail().kind) {
    case TailKind::identity: return Operator::identity(stage_dim(c, n));
    case TailKind::repeat_last: return c.prefix_maps().back();
    case TailKind::scalar_geometric: return Operator(1, 1, {c.tail().ratio});
    default: {
      const int b = c.tail().block;
      const int m = stage_dim(c, n) / b;
      return detail::block_pad(b, m, m + 1);
    }
  }
}

// Composite e_{n-1} o ... o e_m; identity when m == n. Tail segments use the
// closed form of the tail rule instead of a map-by-map product.
inline Operator composite(const OmegaChain& c, int m, int n) {
  if (m < 0 || n < m) throw InvalidStructure("composite: need 0 <= m <= n");
  if (m == n) return Operator::identity(stage_dim(c, m));
  const int p = c.prefix_len();
  if (n <= p || c.tail().kind == TailKind::repeat_last) {
    // repeat_last tail: fold the power into a prefix-style product
    if (c.tail().kind == TailKind::repeat_last && n > p) {
      Operator tail_part = detail::pow_int(c.prefix_maps().back(), n - std::max(m, p));
      if (m >= p) return tail_part;
      Operator acc = chain_map(c, m);
      for (int i = m + 1; i < p; ++i) acc = chain_map(c, i) * acc;
      return tail_part * acc;
    }
    Operator acc = chain_map(c, m);
    for (int i = m + 1; i < n; ++i) acc = chain_map(c, i) * acc;
    return acc;
  }
  const int s = std::max(m, p);
  Operator tail_part = [&]() -> Operator {
    switch (c.tail().kind) {
      case TailKind::identity: return Operator::identity(stage_dim(c, s));
      case TailKind::scalar_geometric:
        return Operator(1, 1, {detail::pow_int(c.tail().ratio, n - s)});
      default: {
        const int b = c.tail().block;
        return detail::block_pad(b, stage_dim(c, s) / b, stage_dim(c, n) / b);
      }
    }
  }();
  if (m >= p) return tail_part;
  Operator acc = chain_map(c, m);
  for (int i = m + 1; i < p; ++i) acc = chain_map(c, i) * acc;
  return tail_part * acc;
}

// Classify every prefix map and one representative tail map against the
// chain's declared category.
inline CheckReport validate_chain(const OmegaChain& c, double tol = 1e-9) {
  CheckReport report;
  for (int i = 0; i < c.prefix_len(); ++i) {
    const OperatorClass cls = classify(c.prefix_maps()[static_cast<std::size_t>(i)], tol);
    report.add("prefix_map_" + std::to_string(i), cls.norm, satisfies(cls, c.category()),
               std::string("classified ") + to_string(cls.tag));
  }
  const OperatorClass cls = classify(chain_map(c, c.prefix_len()), tol);
  report.add("tail_map", cls.norm, satisfies(cls, c.category()),
             std::string("classified ") + to_string(cls.tag));
  return report;
}

inline bool chains_structurally_equal(const OmegaChain& a, const OmegaChain& b, double tol = 0.0) {
  if (a.prefix_dims() != b.prefix_dims()) return false;
  if (a.tail().kind != b.tail().kind || a.tail().block != b.tail().block ||
      std::abs(a.tail().ratio - b.tail().ratio) > tol)
    return false;
  if (a.category() != b.category()) return false;
  for (int i = 0; i < a.prefix_len(); ++i)
    if (!entries_equal(a.prefix_maps()[static_cast<std::size_t>(i)],
                       b.prefix_maps()[static_cast<std::size_t>(i)], tol))
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Chain morphisms
// ---------------------------------------------------------------------------

// Components beyond the explicit prefix are scale * ratio^(n-P) * identity,
// which forces equal source/target stage dimensions there.
struct MorphismTail {
  Scalar scale{1.0, 0.0};
  Scalar ratio{1.0, 0.0};
};

class ChainMorphism {
 public:
  ChainMorphism(OmegaChain source, OmegaChain target, std::vector<Operator> prefix_components,
                MorphismTail tail)
      : source_(std::move(source)),
        target_(std::move(target)),
        prefix_(std::move(prefix_components)),
        tail_(tail) {
    if (!is_finite(tail_.scale) || !is_finite(tail_.ratio))
      throw NotFinite("ChainMorphism: non-finite tail scalars");
    const int p = static_cast<int>(prefix_.size());
    for (int n = 0; n < p; ++n)
      if (prefix_[static_cast<std::size_t>(n)].in_dim() != stage_dim(source_, n) ||
          prefix_[static_cast<std::size_t>(n)].out_dim() != stage_dim(target_, n))
        throw InvalidStructure("ChainMorphism: component " + std::to_string(n) +
                               " does not match stage dimensions");
    const int probe = std::max({p, static_cast<int>(source_.prefix_dims().size()),
                                static_cast<int>(target_.prefix_dims().size())}) +
                      2;
    for (int n = p; n <= probe; ++n)
      if (stage_dim(source_, n) != stage_dim(target_, n))
        throw InvalidStructure("ChainMorphism: scalar tail needs equal stage dimensions beyond the prefix");
    const int sg = source_.tail().kind == TailKind::embed_increment ? source_.tail().block : 0;
    const int tg = target_.tail().kind == TailKind::embed_increment ? target_.tail().block : 0;
    if (sg != tg)
      throw InvalidStructure("ChainMorphism: source and target tails grow at different rates");
  }

  const OmegaChain& source() const { return source_; }
  const OmegaChain& target() const { return target_; }
  const std::vector<Operator>& prefix_components() const { return prefix_; }
  const MorphismTail& tail() const { return tail_; }
  int prefix_len() const { return static_cast<int>(prefix_.size()); }

 private:
  OmegaChain source_, target_;
  std::vector<Operator> prefix_;
  MorphismTail tail_;
};

inline Operator morphism_component(const ChainMorphism& a, int n) {
  if (n < 0) throw InvalidStructure("morphism_component: negative stage");
  if (n < a.prefix_len()) return a.prefix_components()[static_cast<std::size_t>(n)];
  const Scalar s = a.tail().scale * detail::pow_int(a.tail().ratio, n - a.prefix_len());
  return s * Operator::identity(stage_dim(a.source(), n));
}

inline ChainMorphism identity_morphism(const OmegaChain& c) {
  return ChainMorphism(c, c, {}, MorphismTail{{1.0, 0.0}, {1.0, 0.0}});
}

// Naturality squares alpha_{n+1} o c_n = d_n o alpha_n for n < depth.
inline CheckReport validate_morphism(const ChainMorphism& a, int depth, double tol = 1e-9) {
  if (depth < 1) throw InvalidStructure("validate_morphism: depth must be >= 1");
  CheckReport report;
  for (int n = 0; n < depth; ++n) {
    const double r = max_abs_diff(morphism_component(a, n + 1) * chain_map(a.source(), n),
                                  chain_map(a.target(), n) * morphism_component(a, n));
    report.add("square_" + std::to_string(n), r, r <= tol);
  }
  return report;
}

inline ChainMorphism compose(const ChainMorphism& beta, const ChainMorphism& alpha) {
  if (!chains_structurally_equal(beta.source(), alpha.target(), 0.0))
    throw InvalidStructure("compose: middle chains differ");
  const int p = std::max(alpha.prefix_len(), beta.prefix_len());
  std::vector<Operator> comps;
  comps.reserve(static_cast<std::size_t>(p));
  for (int n = 0; n < p; ++n)
    comps.push_back(morphism_component(beta, n) * morphism_component(alpha, n));
  MorphismTail tail;
  tail.ratio = beta.tail().ratio * alpha.tail().ratio;
  tail.scale = beta.tail().scale * detail::pow_int(beta.tail().ratio, p - beta.prefix_len()) *
               alpha.tail().scale * detail::pow_int(alpha.tail().ratio, p - alpha.prefix_len());
  return ChainMorphism(alpha.source(), beta.target(), std::move(comps), tail);
}

}  // namespace colim
