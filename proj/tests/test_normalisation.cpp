#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "colim/normalisation.hpp"
#include "test_support.hpp"

using namespace colim;

namespace {

constexpr Scalar kOne{1.0, 0.0};

// all connecting maps equal [2]
OmegaChain doubling_chain() {
  return OmegaChain({1, 1}, {Operator(1, 1, {Scalar{2.0, 0.0}})}, TailRule::repeat_last(),
                    MapCategory::bounded);
}

}  // namespace

TEST_CASE("r values", "[normalisation]") {
  CHECK(r_value(RVariant::unit_at_zero, Operator::zero(2, 3)) == 1.0);
  CHECK(r_value(RVariant::continuous_clamp, Operator(1, 1, {Scalar{0.5, 0.0}})) == 1.0);
  CHECK(r_value(RVariant::unit_at_zero, Operator(1, 1, {Scalar{3.0, 0.0}})) == 3.0);
  CHECK(r_value(RVariant::continuous_clamp, Operator(1, 1, {Scalar{3.0, 0.0}})) == 3.0);

  auto rng = support::rng_at(401, 0);
  for (int i = 0; i < 30; ++i) {
    const Operator b = support::random_bounded(3, 3, rng);
    for (RVariant v : {RVariant::unit_at_zero, RVariant::continuous_clamp}) {
      const double r = r_value(v, b);
      CHECK(r > 0.0);
      CHECK(r >= operator_norm(b) - 1e-12);
    }
  }
}

TEST_CASE("normalising the doubling chain", "[normalisation]") {
  const NormalizedChain nc = normalize_chain(doubling_chain(), RVariant::unit_at_zero);
  CHECK(max_abs_diff(chain_map(nc.chain, 0), Operator::identity(1)) == 0.0);
  CHECK(max_abs_diff(chain_map(nc.chain, 5), Operator::identity(1)) == 0.0);
  CHECK(validate_chain(nc.chain, 1e-9).ok);

  const double log2 = std::log(2.0);
  for (int n = 0; n < 40; ++n) {
    CHECK(eta_log(nc, n) == Catch::Approx(-n * log2).margin(1e-12));
    CHECK(eta_value(nc, n) == Catch::Approx(std::pow(2.0, -n)).epsilon(1e-12));
  }
  // squares of the defining diagram: eta_{n+1} c_n = (c_n / r(c_n)) eta_n
  const OmegaChain orig = doubling_chain();
  for (int n = 0; n < 12; ++n)
    CHECK(max_abs_diff(Scalar{eta_value(nc, n + 1), 0.0} * chain_map(orig, n),
                       chain_map(nc.chain, n) * Scalar{eta_value(nc, n), 0.0}) <= 1e-12);
}

TEST_CASE("zero maps are left alone", "[normalisation]") {
  const OmegaChain zc({2, 2}, {Operator::zero(2, 2)}, TailRule::repeat_last(),
                      MapCategory::bounded);
  const NormalizedChain nc = normalize_chain(zc, RVariant::unit_at_zero);
  CHECK(max_abs_diff(chain_map(nc.chain, 0), Operator::zero(2, 2)) == 0.0);
  for (int n = 0; n < 10; ++n) CHECK(eta_value(nc, n) == 1.0);
}

TEST_CASE("contractions get scaled up too", "[normalisation]") {
  // prefix norms (3, 1/2), then identity tail
  const OmegaChain c({1, 1, 1},
                     {Operator(1, 1, {Scalar{3.0, 0.0}}), Operator(1, 1, {Scalar{0.5, 0.0}})},
                     TailRule::identity(), MapCategory::bounded);
  const NormalizedChain nc = normalize_chain(c, RVariant::unit_at_zero);
  CHECK(operator_norm(chain_map(nc.chain, 0)) == Catch::Approx(1.0));
  CHECK(operator_norm(chain_map(nc.chain, 1)) == Catch::Approx(1.0));  // 1/2 scaled up
  CHECK(operator_norm(chain_map(nc.chain, 7)) == Catch::Approx(1.0));
  CHECK(eta_value(nc, 2) == Catch::Approx(2.0 / 3.0));  // 1/(3 * 1/2)

  // continuous_clamp leaves the contraction alone
  const NormalizedChain cc = normalize_chain(c, RVariant::continuous_clamp);
  CHECK(chain_map(cc.chain, 1)(0, 0) == Scalar{0.5, 0.0});
}

TEST_CASE("normalized chains are contraction chains", "[normalisation]") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto rng = support::rng_at(402, s);
    const OmegaChain c = support::random_bounded_chain(rng, 2 + static_cast<int>(s % 3), 3);
    for (RVariant v : {RVariant::unit_at_zero, RVariant::continuous_clamp}) {
      const NormalizedChain nc = normalize_chain(c, v);
      CHECK(validate_chain(nc.chain, 1e-9).ok);
      for (int n = 0; n < 8; ++n) CHECK(eta_value(nc, n) > 0.0);
    }
  }
}

TEST_CASE("morphism rescaling formula", "[normalisation]") {
  // component 1 of the image of alpha = 1 between the [2]- and [4]-chains
  const OmegaChain c2 = doubling_chain();
  const OmegaChain c4({1, 1}, {Operator(1, 1, {Scalar{4.0, 0.0}})}, TailRule::repeat_last(),
                      MapCategory::bounded);
  const ChainMorphism one(c2, c4, {}, MorphismTail{kOne, kOne});
  const ChainMorphism img = normalize_morphism(one, RVariant::unit_at_zero);
  CHECK(std::abs(morphism_component(img, 1)(0, 0) - Scalar{0.5, 0.0}) <= 1e-12);
  CHECK(std::abs(morphism_component(img, 3)(0, 0) - Scalar{0.125, 0.0}) <= 1e-12);

  // the eta squares commute even here (both sides carry the same scalar)
  CHECK(check_eta_naturality(one, RVariant::unit_at_zero, 16).ok);
}

TEST_CASE("functor laws", "[normalisation]") {
  for (std::uint64_t s = 0; s < 8; ++s) {
    auto rng = support::rng_at(403, s);
    const OmegaChain c = support::random_bounded_chain(rng, 2 + static_cast<int>(s % 2), 2);
    for (RVariant v : {RVariant::unit_at_zero, RVariant::continuous_clamp}) {
      // identity law
      const ChainMorphism nid = normalize_morphism(identity_morphism(c), v);
      for (int n = 0; n < 8; ++n)
        CHECK(max_abs_diff(morphism_component(nid, n), Operator::identity(stage_dim(c, n))) <=
              1e-12);

      // composition law
      const ChainMorphism alpha = support::random_morphism(rng, c);
      const ChainMorphism beta = support::random_morphism(rng, alpha.target());
      const ChainMorphism lhs = normalize_morphism(compose(beta, alpha), v);
      const ChainMorphism rhs = compose(normalize_morphism(beta, v), normalize_morphism(alpha, v));
      for (int n = 0; n < 10; ++n)
        CHECK(max_abs_diff(morphism_component(lhs, n), morphism_component(rhs, n)) <= 1e-10);

      // the image is a morphism of the normalized chains
      CHECK(validate_morphism(normalize_morphism(alpha, v), 10, 1e-8).ok);
    }
  }
}

TEST_CASE("eta is natural", "[normalisation]") {
  auto rng = support::rng_at(404, 0);
  const OmegaChain c = support::random_bounded_chain(rng, 3, 2);
  const ChainMorphism id = identity_morphism(c);
  CHECK(check_eta_naturality(id, RVariant::unit_at_zero, 16, 1e-12).ok);

  for (std::uint64_t s = 0; s < 8; ++s) {
    auto rng2 = support::rng_at(405, s);
    const OmegaChain src = support::random_bounded_chain(rng2, 2 + static_cast<int>(s % 3), 2);
    const ChainMorphism alpha = support::random_morphism(rng2, src);
    for (RVariant v : {RVariant::unit_at_zero, RVariant::continuous_clamp})
      CHECK(check_eta_naturality(alpha, v, 32, 1e-10).ok);
  }
}

TEST_CASE("naive map-wise normalisation is not functorial", "[normalisation]") {
  const NaiveNormalizationWitness w = naive_normalization_witness();
  CHECK(w.residual > 0.4);
  // recompute both routes from the witness maps
  const Operator comp = w.b_prime * w.b;
  const Operator lhs = Scalar{1.0 / operator_norm(comp), 0.0} * comp;
  const Operator rhs = (Scalar{1.0 / operator_norm(w.b_prime), 0.0} * w.b_prime) *
                       (Scalar{1.0 / operator_norm(w.b), 0.0} * w.b);
  CHECK(max_abs_diff(lhs, w.composed_then_normalized) == 0.0);
  CHECK(max_abs_diff(rhs, w.normalized_then_composed) == 0.0);
  CHECK(max_abs_diff(lhs, rhs) == Catch::Approx(w.residual));
}
