#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "colim/linalg.hpp"
#include "test_support.hpp"

using namespace colim;

namespace {
constexpr Scalar kOne{1.0, 0.0};
constexpr Scalar kI{0.0, 1.0};
}  // namespace

TEST_CASE("inner product basics", "[linalg]") {
  const FinVector e1 = FinVector::basis(2, 0);
  const FinVector e2 = FinVector::basis(2, 1);
  CHECK(inner(e1, e1) == kOne);
  CHECK(inner(e1, e2) == Scalar{0.0, 0.0});
  const FinVector a({kOne, kOne});
  const FinVector b({kOne, Scalar{-1.0, 0.0}});
  CHECK(inner(a, b) == Scalar{0.0, 0.0});
  CHECK_THROWS_AS(inner(e1, FinVector::basis(3, 0)), DimensionMismatch);
}

TEST_CASE("inner product is sesquilinear and positive", "[linalg]") {
  auto rng = support::rng_at(101, 0);
  for (int i = 0; i < 50; ++i) {
    const FinVector x = random_vector(5, rng);
    const FinVector y = random_vector(5, rng);
    const FinVector z = random_vector(5, rng);
    const Scalar a = support::random_phase(rng) * Scalar{support::urand(rng, 0.1, 2.0), 0.0};
    // conjugate-linear in the first slot, linear in the second
    CHECK(std::abs(inner(a * x, y) - std::conj(a) * inner(x, y)) < 1e-12);
    CHECK(std::abs(inner(x, a * y) - a * inner(x, y)) < 1e-12);
    CHECK(std::abs(inner(x, y + z) - inner(x, y) - inner(x, z)) < 1e-12);
    CHECK(inner(x, x).real() >= 0.0);
    CHECK(std::abs(inner(x, x).imag()) < 1e-12);
  }
}

TEST_CASE("stored structures reject non-finite entries", "[linalg]") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(FinVector({Scalar{nan, 0.0}}), NotFinite);
  CHECK_THROWS_AS(Operator(1, 1, {Scalar{0.0, std::numeric_limits<double>::infinity()}}), NotFinite);
  CHECK_THROWS_AS(Operator(2, 2, {kOne, kOne, kOne}), DimensionMismatch);
}

TEST_CASE("adjoint", "[linalg]") {
  const Operator id = Operator::identity(3);
  CHECK(entries_equal(adjoint(id), id));
  CHECK(adjoint(Operator(1, 1, {kI}))(0, 0) == -kI);

  auto rng = support::rng_at(102, 0);
  for (int i = 0; i < 40; ++i) {
    const Operator g = support::random_bounded(3, 2, rng);
    const FinVector u = random_vector(3, rng);
    const FinVector v = random_vector(2, rng);
    CHECK(std::abs(inner(adjoint(g) * u, v) - inner(u, g * v)) < 1e-12);
    CHECK(entries_equal(adjoint(adjoint(g)), g));  // exact
  }
}

TEST_CASE("operator norm", "[linalg]") {
  CHECK(operator_norm(Operator::identity(2)) == 1.0);
  CHECK(operator_norm(Operator(1, 1, {Scalar{0.5, 0.0}})) == 0.5);

  const Operator g = Operator::from_rows({{Scalar{0.0, 0.0}, Scalar{2.0, 0.0}},
                                          {Scalar{0.0, 0.0}, Scalar{0.0, 0.0}}});
  CHECK(operator_norm(g) == Catch::Approx(2.0).margin(1e-12));
  // independent oracle: maximize |Gx| over random unit vectors
  auto rng = support::rng_at(103, 0);
  CHECK(support::sampled_operator_norm(g, rng) == Catch::Approx(2.0).margin(1e-9));

  // bound attained and never exceeded
  for (int i = 0; i < 30; ++i) {
    const Operator h = support::random_bounded(4, 3, rng);
    const double nrm = operator_norm(h);
    for (int k = 0; k < 10; ++k) {
      const FinVector x = random_vector(3, rng);
      CHECK(norm(h * x) <= nrm * norm(x) + 1e-9);
    }
    CHECK(support::sampled_operator_norm(h, rng) == Catch::Approx(nrm).margin(1e-8));
  }
}

TEST_CASE("operator norm beyond the SVD cutoff uses power iteration", "[linalg]") {
  // 80-dim diagonal with known top singular value
  std::vector<Scalar> diag(80, Scalar{0.25, 0.0});
  diag[17] = Scalar{0.0, 1.7};
  const Operator g = Operator::diagonal(diag);
  CHECK(operator_norm(g) == Catch::Approx(1.7).margin(1e-9));

  auto rng = support::rng_at(104, 0);
  const Operator u = support::random_unitary(70, rng);
  CHECK(operator_norm(u) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("classification", "[linalg]") {
  const OperatorClass id3 = classify(Operator::identity(3), 1e-9);
  CHECK(id3.tag == MapCategory::isometry);
  CHECK(id3.norm == Catch::Approx(1.0).margin(1e-12));

  CHECK(classify(Operator(1, 1, {Scalar{0.5, 0.0}}), 1e-9).tag == MapCategory::contraction);

  const OperatorClass two = classify(Operator(1, 1, {Scalar{2.0, 0.0}}), 1e-9);
  CHECK(two.tag == MapCategory::bounded);
  CHECK(two.norm == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("kronecker products", "[linalg]") {
  CHECK(entries_equal(kronecker(Operator::identity(2), Operator::identity(3)),
                      Operator::identity(6)));
  CHECK(kronecker(Operator(1, 1, {Scalar{2.0, 0.0}}), Operator(1, 1, {Scalar{3.0, 0.0}}))(0, 0) ==
        Scalar{6.0, 0.0});

  auto rng = support::rng_at(105, 0);
  for (int i = 0; i < 30; ++i) {
    const Operator a = random_contraction(2, 2, rng());
    const Operator b = random_contraction(2, 2, rng());
    const FinVector u = random_vector(2, rng);
    const FinVector v = random_vector(2, rng);
    CHECK(max_abs_diff(kronecker(a, b) * kronecker(u, v), kronecker(a * u, b * v)) < 1e-12);
  }
}

TEST_CASE("gap", "[linalg]") {
  CHECK(gap(Operator::identity(2), FinVector({kOne, kI})) == 0.0);
  CHECK(gap(Operator::zero(1, 1), FinVector({kOne})) == 1.0);
  CHECK(gap(Operator(1, 1, {Scalar{0.5, 0.0}}), FinVector({Scalar{2.0, 0.0}})) ==
        Catch::Approx(3.0).margin(1e-12));
  CHECK_THROWS_AS(gap(Operator(1, 1, {Scalar{2.0, 0.0}}), FinVector({kOne})), CategoryViolation);

  // isometries leave no gap
  auto rng = support::rng_at(106, 0);
  for (int i = 0; i < 20; ++i) {
    const Operator u = support::random_unitary(4, rng);
    CHECK(gap(u, random_vector(4, rng)) < 1e-10);
  }
}

TEST_CASE("gap inequality", "[linalg]") {
  const FinVector e1 = FinVector::basis(2, 0);
  const LemmaCheck id = lemma_check(Operator::identity(2), e1, FinVector::basis(2, 1));
  CHECK(id.lhs == 0.0);
  CHECK(id.rhs == 0.0);
  CHECK(id.holds);

  // Cauchy-Schwarz equality case
  const LemmaCheck z = lemma_check(Operator::zero(2, 2), e1, e1);
  CHECK(z.lhs == Catch::Approx(1.0).margin(1e-12));
  CHECK(z.rhs == Catch::Approx(1.0).margin(1e-12));
  CHECK(z.holds);

  CHECK_THROWS_AS(lemma_check(Operator(1, 1, {Scalar{2.0, 0.0}}), FinVector({kOne}), FinVector({kOne})),
                  CategoryViolation);

  auto rng = support::rng_at(107, 0);
  for (int i = 0; i < 3000; ++i) {
    const int out = 1 + static_cast<int>(rng() % 8);
    const int in = 1 + static_cast<int>(rng() % 8);
    const Operator g = random_contraction(out, in, rng());
    const LemmaCheck lc = lemma_check(g, random_vector(in, rng), random_vector(in, rng));
    REQUIRE(lc.holds);
    REQUIRE(lc.lhs <= lc.rhs + 1e-9);
  }
}

TEST_CASE("random contractions", "[linalg]") {
  CHECK(std::abs(random_contraction(1, 1, 7)(0, 0)) <= 1.0 + 1e-12);
  CHECK(operator_norm(random_contraction(4, 4, 8)) <= 1.0 + 1e-12);
  CHECK(entries_equal(random_contraction(3, 5, 9), random_contraction(3, 5, 9)));
  for (std::uint64_t s = 0; s < 20; ++s)
    CHECK(satisfies(classify(random_contraction(3, 3, s), 1e-9), MapCategory::contraction));
}

TEST_CASE("norm is submultiplicative on samples", "[linalg]") {
  auto rng = support::rng_at(108, 0);
  for (int i = 0; i < 40; ++i) {
    const Operator a = support::random_bounded(3, 4, rng);
    const Operator b = support::random_bounded(4, 2, rng);
    CHECK(operator_norm(a * b) <=
          operator_norm(a) * operator_norm(b) + 1e-9 * std::max(1.0, operator_norm(a) * operator_norm(b)));
  }
}
