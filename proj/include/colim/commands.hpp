#pragma once

// Command implementations behind the CLI. Each returns a structured report
// (JSON): command echo, params, seed, one record per check, and an overall
// verdict. Reports are deterministic given identical inputs, seed and params.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "colim/chain_io.hpp"
#include "colim/colimit.hpp"
#include "colim/counterexamples.hpp"
#include "colim/normalisation.hpp"
#include "colim/tensor.hpp"

namespace colim {

struct CmdOptions {
  int depth = 512;
  double tol = 1e-9;
  int window = 8;
  std::uint64_t seed = 42;
  int samples = 100;

  ColimParams colim_params() const {
    ColimParams p;
    p.depth = depth;
    p.window = window;
    p.tol = tol;
    return p;
  }
};

namespace detail {

class ReportBuilder {
 public:
  ReportBuilder(std::string command, json params, std::uint64_t seed) {
    j_["command"] = std::move(command);
    j_["params"] = std::move(params);
    j_["seed"] = seed;
    j_["checks"] = json::array();
  }

  void check(const std::string& name, bool pass, json extra = json::object()) {
    extra["name"] = name;
    extra["pass"] = pass;
    ok_ = ok_ && pass;
    j_["checks"].push_back(std::move(extra));
  }

  void attach(const std::string& key, json value) { j_[key] = std::move(value); }

  json finish() {
    j_["verdict"] = ok_ ? "pass" : "fail";
    return j_;
  }

 private:
  json j_;
  bool ok_ = true;
};

inline json estimate_json(const LimitEstimate& e) {
  return {{"value", to_json(e.value)},
          {"error", e.error},
          {"status", to_string(e.status)},
          {"depth_used", e.depth_used}};
}

inline json estimate_json(const NormEstimate& e) {
  return {{"value", e.value},
          {"error", e.error},
          {"status", to_string(e.status)},
          {"depth_used", e.depth_used}};
}

inline void echo_validation(ReportBuilder& rb, const std::string& prefix, const CheckReport& rep) {
  rb.check(prefix + "_valid", rep.ok, {{"max_residual", rep.max_residual()}});
}

}  // namespace detail

inline ColimClass class_from_json(const json& j, const OmegaChain& chain) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer())
    throw ParseError("class spec must be [stage, [[re,im],...]], got " + j.dump());
  return inclusion(chain, j[0].get<int>(), vector_from_json(j[1]));
}

// ---------------------------------------------------------------------------
// verify-lemma
// ---------------------------------------------------------------------------

inline json cmd_verify_lemma(int samples, int max_dim, std::uint64_t seed, double tol) {
  if (samples < 1 || max_dim < 1) throw InvalidStructure("verify-lemma: samples and max_dim must be >= 1");
  detail::ReportBuilder rb("verify-lemma",
                           {{"samples", samples}, {"max_dim", max_dim}, {"tol", tol}}, seed);
  double worst = -1.0;
  bool all_hold = true;
  for (int i = 0; i < samples; ++i) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const int out = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_dim));
    const int in = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_dim));
    const Operator g = random_contraction(out, in, rng());
    const FinVector x = random_vector(in, rng);
    const FinVector y = random_vector(in, rng);
    const LemmaCheck lc = lemma_check(g, x, y, tol);
    worst = std::max(worst, lc.lhs - lc.rhs);
    all_hold = all_hold && lc.holds;
  }
  rb.check("inequality_holds_everywhere", all_hold, {{"samples", samples}});
  rb.check("worst_residual", worst <= tol, {{"value", worst}});

  // equality cases: the zero map on parallel vectors (Cauchy-Schwarz) and
  // the identity (both sides vanish)
  {
    std::mt19937_64 rng(derive_seed(seed, 0xE0));
    const FinVector x = random_vector(3, rng);
    const LemmaCheck z = lemma_check(Operator::zero(3, 3), x, x, tol);
    rb.check("zero_map_equality", std::abs(z.lhs - z.rhs) <= tol,
             {{"lhs", z.lhs}, {"rhs", z.rhs}});
    const FinVector y = random_vector(3, rng);
    const LemmaCheck id = lemma_check(Operator::identity(3), x, y, tol);
    rb.check("identity_equality", std::abs(id.lhs - id.rhs) <= tol,
             {{"lhs", id.lhs}, {"rhs", id.rhs}});
  }
  return rb.finish();
}

// ---------------------------------------------------------------------------
// colimit
// ---------------------------------------------------------------------------

inline json cmd_colimit(const std::string& file, const std::vector<std::string>& class_specs,
                        const CmdOptions& opts) {
  const ChainFile f = load_chain_file(file, opts.tol);
  const ColimParams params = opts.colim_params();
  detail::ReportBuilder rb("colimit", {{"file", file}, {"depth", opts.depth}, {"tol", opts.tol}},
                           opts.seed);
  detail::echo_validation(rb, "chain", validate_chain(f.chain, opts.tol));

  std::vector<ColimClass> classes;
  for (const std::string& spec : class_specs) {
    json j;
    try {
      j = json::parse(spec);
    } catch (const json::exception& e) {
      throw ParseError("bad class spec '" + spec + "': " + e.what());
    }
    classes.push_back(class_from_json(j, f.chain));
  }
  if (classes.empty()) classes.push_back(inclusion(f.chain, 0, FinVector::basis(stage_dim(f.chain, 0), 0)));

  for (std::size_t i = 0; i < classes.size(); ++i) {
    const NormEstimate nrm = colim_norm(f.chain, classes[i], params);
    rb.check("class_" + std::to_string(i) + "_norm", true, detail::estimate_json(nrm));
    const ZeroVerdict v = zero_class_verdict(f.chain, classes[i], params);
    rb.check("class_" + std::to_string(i) + "_zero", v != ZeroVerdict::indeterminate,
             {{"value", to_string(v)}});
  }
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (std::size_t k = i + 1; k < classes.size(); ++k) {
      const LimitEstimate est = colim_inner(f.chain, classes[i], classes[k], params);
      rb.check("inner_" + std::to_string(i) + "_" + std::to_string(k), true,
               detail::estimate_json(est));
    }
  return rb.finish();
}

// ---------------------------------------------------------------------------
// tensor-check
// ---------------------------------------------------------------------------

inline json cmd_tensor_check(const std::string& file, int h_dim, const CmdOptions& opts) {
  const ChainFile f = load_chain_file(file, opts.tol);
  const ColimParams params = opts.colim_params();
  detail::ReportBuilder rb(
      "tensor-check",
      {{"file", file}, {"h_dim", h_dim}, {"samples", opts.samples}, {"tol", opts.tol}},
      opts.seed);
  const TensorChain tc = tensor_chain(h_dim, f.chain);
  detail::echo_validation(rb, "derived_chain", validate_chain(tc.derived, opts.tol));

  const CheckReport iso = check_isometry(tc, opts.samples, opts.seed, params);
  rb.check("isometry", iso.ok, {{"max_residual", iso.max_residual()}});

  const Operator fmap = random_contraction(h_dim, h_dim, derive_seed(opts.seed, 0xA11));
  const CheckReport nat = check_naturality(fmap, f.chain, opts.samples,
                                           derive_seed(opts.seed, 0xA12), params);
  rb.check("naturality", nat.ok, {{"max_residual", nat.max_residual()}});
  return rb.finish();
}

// ---------------------------------------------------------------------------
// normalize
// ---------------------------------------------------------------------------

inline json cmd_normalize(const std::string& file, RVariant variant, const CmdOptions& opts) {
  const ChainFile f = load_chain_file(file, opts.tol);
  detail::ReportBuilder rb("normalize",
                           {{"file", file}, {"r", to_string(variant)}, {"depth", opts.depth}},
                           opts.seed);
  const NormalizedChain nc = normalize_chain(f.chain, variant, opts.tol);
  detail::echo_validation(rb, "normalized_chain", validate_chain(nc.chain, opts.tol));

  const int table = std::min(opts.depth, 64);
  json etas = json::array();
  for (int n = 0; n <= table; ++n)
    etas.push_back({{"n", n}, {"log", eta_log(nc, n)}, {"linear", eta_value(nc, n)}});
  rb.attach("eta", std::move(etas));
  rb.attach("normalized_chain", chain_to_json(nc.chain));

  // squares eta_{n+1} * c_n = (c_n / r(c_n)) * eta_n
  double worst = 0.0;
  const int squares = std::min(opts.depth, 32);
  for (int n = 0; n < squares; ++n)
    worst = std::max(worst,
                     max_abs_diff(Scalar{eta_value(nc, n + 1), 0.0} * chain_map(f.chain, n),
                                  Scalar{eta_value(nc, n), 0.0} * chain_map(nc.chain, n)));
  rb.check("eta_squares", worst <= 1e-10, {{"max_residual", worst}, {"depth", squares}});
  return rb.finish();
}

inline RVariant r_variant_from_string(const std::string& s) {
  if (s == "unit_at_zero") return RVariant::unit_at_zero;
  if (s == "continuous_clamp") return RVariant::continuous_clamp;
  throw ParseError("unknown r variant '" + s + "' (use unit_at_zero or continuous_clamp)");
}

// ---------------------------------------------------------------------------
// counterexample
// ---------------------------------------------------------------------------

inline json cmd_counterexample(const std::string& which, const CmdOptions& opts) {
  const ColimParams params = opts.colim_params();
  detail::ReportBuilder rb("counterexample", {{"which", which}, {"depth", opts.depth}},
                           opts.seed);
  if (which == "scaling") {
    const OmegaChain chain = scaling_chain();
    const Cocone cocone = scaling_cocone();
    detail::echo_validation(rb, "chain", validate_chain(chain, opts.tol));

    const ColimClass one = inclusion(chain, 0, FinVector({Scalar{1.0, 0.0}}));
    const NormEstimate nrm = colim_norm(chain, one, params);
    rb.check("unit_class_norm_zero",
             nrm.value == 0.0 && nrm.error == 0.0 && nrm.status == EstimateStatus::exact_stabilized,
             detail::estimate_json(nrm));
    rb.check("unit_class_is_zero", is_zero_class(chain, one, params));

    const CoconeReport cr = validate_cocone(cocone, std::max(opts.depth, 32), opts.tol);
    rb.check("cocone_valid", cr.ok, {{"max_component_norm", cr.max_component_norm}});

    const GlobalBound gb = global_bound(cocone, opts.depth);
    const double expected = std::ldexp(1.0, opts.depth - 1);
    rb.check("sup_norm_exact", gb.sup_norm == expected,
             {{"value", gb.sup_norm}, {"expected", expected}});
    rb.check("norms_growing", opts.depth < 4 ? true : gb.growing);

    const FinVector out = induced_apply(cocone, one);
    rb.check("paradox_nonzero_image", norm(out) > 0.5,
             {{"image_norm", norm(out)},
              {"note", "colimit norm of the class is 0, the induced image is not"}});

    const DichotomyReport dr = dichotomy_report(cocone, opts.depth, opts.seed, params);
    rb.check("dichotomy_flags_unbounded", dr.zero_norm_paradox && !dr.bounded_in_window,
             {{"sup_norm", dr.sup_norm}, {"growing", dr.growing}});
    return rb.finish();
  }
  if (which == "embedding") {
    const OmegaChain chain = embedding_chain();
    const Cocone cocone = embedding_cocone(opts.depth);
    detail::echo_validation(rb, "chain", validate_chain(chain, opts.tol));

    const CoconeReport cr = validate_cocone(cocone, opts.depth, opts.tol);
    rb.check("cocone_valid", cr.ok, {{"max_component_norm", cr.max_component_norm}});

    const GlobalBound gb = global_bound(cocone, opts.depth);
    bool norms_match = true;
    for (int s = 0; s < opts.depth; ++s)
      norms_match = norms_match &&
                    std::abs(gb.norms[static_cast<std::size_t>(s)] - (s + 1)) <= opts.tol;
    rb.check("restriction_norms_1_to_depth", norms_match, {{"norms", gb.norms}});
    rb.check("norms_growing", opts.depth < 4 ? true : gb.growing);

    // inclusions have trivial kernels: nonzero vectors keep their norm
    std::mt19937_64 rng(derive_seed(opts.seed, 0xEC));
    bool kernels_trivial = true;
    for (int i = 0; i < std::min(opts.depth, 8); ++i) {
      const int n = static_cast<int>(rng() % static_cast<std::uint64_t>(opts.depth));
      const FinVector x = random_vector(stage_dim(chain, n), rng);
      const NormEstimate nn = colim_norm(chain, inclusion(chain, n, x), params);
      kernels_trivial = kernels_trivial && std::abs(nn.value - norm(x)) <= opts.tol &&
                        nn.value > params.zero_threshold;
    }
    rb.check("inclusions_trivial_kernel", kernels_trivial);

    const DichotomyReport dr = dichotomy_report(cocone, opts.depth, opts.seed, params);
    rb.check("dichotomy_flags_unbounded", opts.depth < 4 ? true : dr.growing,
             {{"sup_norm", dr.sup_norm}, {"max_colim_excess", dr.max_colim_excess}});
    return rb.finish();
  }
  throw ParseError("unknown counterexample '" + which + "' (use scaling or embedding)");
}

// ---------------------------------------------------------------------------
// universal-map
// ---------------------------------------------------------------------------

inline json cmd_universal_map(const std::string& file, const CmdOptions& opts) {
  const ChainFile f = load_chain_file(file, opts.tol);
  if (!f.cocone) throw ParseError("'" + file + "' holds no cocone; universal-map needs one");
  const Cocone& cocone = *f.cocone;
  const ColimParams params = opts.colim_params();
  detail::ReportBuilder rb("universal-map",
                           {{"file", file},
                            {"depth", opts.depth},
                            {"samples", opts.samples},
                            {"tol", opts.tol}},
                           opts.seed);
  detail::echo_validation(rb, "chain", validate_chain(f.chain, opts.tol));
  const int vdepth = std::min(opts.depth, 64);
  const CoconeReport cr = validate_cocone(cocone, vdepth, opts.tol);
  rb.check("cocone_valid", cr.ok, {{"max_component_norm", cr.max_component_norm}});

  // well-definedness: the induced value must not depend on the representative
  double worst = 0.0;
  const int span = static_cast<int>(f.chain.prefix_dims().size()) + 2;
  for (int i = 0; i < opts.samples; ++i) {
    std::mt19937_64 rng(derive_seed(opts.seed, static_cast<std::uint64_t>(i)));
    const int n = static_cast<int>(rng() % static_cast<std::uint64_t>(span));
    const ColimClass c = inclusion(f.chain, n, random_vector(stage_dim(f.chain, n), rng));
    const int m = n + 1 + static_cast<int>(rng() % 4);
    worst = std::max(worst,
                     max_abs_diff(induced_apply(cocone, c), induced_apply(cocone, push(f.chain, c, m))));
  }
  rb.check("induced_well_defined", worst <= opts.tol, {{"max_residual", worst}});

  if (cocone.category() == MapCategory::contraction) {
    double excess = 0.0;
    for (int i = 0; i < opts.samples; ++i) {
      std::mt19937_64 rng(derive_seed(opts.seed, 0x1000 + static_cast<std::uint64_t>(i)));
      const int n = static_cast<int>(rng() % static_cast<std::uint64_t>(span));
      const ColimClass c = inclusion(f.chain, n, random_vector(stage_dim(f.chain, n), rng));
      const NormEstimate cn = colim_norm(f.chain, c, params);
      excess = std::max(excess, norm(induced_apply(cocone, c)) - cn.value - cn.error);
    }
    rb.check("induced_contractive", excess <= opts.tol, {{"max_excess", excess}});
  }

  const DichotomyReport dr = dichotomy_report(cocone, vdepth, opts.seed, params);
  rb.check("dichotomy", cocone.category() == MapCategory::contraction ? dr.contraction_ok : true,
           {{"sup_norm", dr.sup_norm},
            {"growing", dr.growing},
            {"zero_norm_paradox", dr.zero_norm_paradox},
            {"max_colim_excess", dr.max_colim_excess},
            {"bounded_in_window", dr.bounded_in_window}});
  return rb.finish();
}

}  // namespace colim
