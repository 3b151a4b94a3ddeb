#include "doctest.h"
#include "support.hpp"

using namespace mkepler;
using mkepler::testing::interior_by_adjoint;
using mkepler::testing::random_blade;
using mkepler::testing::random_multivector;
using mkepler::testing::vector_dot;

namespace {
const Metric E3 = Metric::euclidean(3);
const Metric E4 = Metric::euclidean(4);
const Metric E5 = Metric::euclidean(5);
const Metric L2 = Metric::lorentz(2);

Multivectord e(const Metric& m, std::initializer_list<int> labels) { return Multivectord::basis(m, labels); }
}  // namespace

TEST_CASE("blade ranks round trip") {
  for (int g = 0; g <= 6; ++g)
    for (Eigen::Index r = 0; r < blades::binomial(9, g); ++r) {
      const BladeMask b = blades::unrank(r, g);
      CHECK(std::popcount(b) == g);
      CHECK(blades::rank(b) == r);
    }
}

TEST_CASE("wedge basics") {
  CHECK((e(E3, {1}) ^ e(E3, {1})).is_zero());
  const auto lhs = (e(E3, {1}) + e(E3, {2})) ^ e(E3, {2});
  CHECK(lhs.coeff({1, 2}) == doctest::Approx(1.0));
  CHECK(lhs.coefficient_norm() == doctest::Approx(1.0));

  const auto p = e(E4, {1, 2});
  CHECK((p ^ p).is_zero());
  const auto q = e(E4, {1, 2}) + e(E4, {3, 4});
  const auto qq = q ^ q;
  CHECK(qq.grade() == 4);
  CHECK(qq.coeff({1, 2, 3, 4}) == doctest::Approx(2.0));
}

TEST_CASE("wedge rejects mixed metrics and truncates above the top grade") {
  CHECK_THROWS_AS(wedge(e(E3, {1}), e(E4, {1})), MetricMismatch);
  const auto top = e(E3, {1, 2}) ^ e(E3, {1, 3});
  CHECK(top.is_zero());
  const auto over = e(E3, {1, 2}) ^ e(E3, {1, 2});
  CHECK(over.is_zero());
}

TEST_CASE("inner products with both signatures") {
  CHECK(inner(e(E3, {1, 2}), e(E3, {1, 2})) == doctest::Approx(1.0));
  CHECK(inner(e(L2, {0, 1}), e(L2, {0, 1})) == doctest::Approx(-1.0));
  CHECK(inner(e(L2, {0, 1, 2}), e(L2, {0, 1, 2})) == doctest::Approx(1.0));
  CHECK(inner(e(L2, {0}), e(L2, {0})) == doctest::Approx(1.0));
  CHECK(inner(e(L2, {1}), e(L2, {1})) == doctest::Approx(-1.0));
  CHECK(inner(e(E3, {1}), e(E3, {1, 2})) == 0.0);
}

TEST_CASE("interior product examples") {
  const auto a = interior(e(E3, {1}), e(E3, {1, 2}));
  CHECK(a.coeff({2}) == doctest::Approx(1.0));
  CHECK(a.coefficient_norm() == doctest::Approx(1.0));
  const auto b = interior(e(E3, {2}), e(E3, {1, 2}));
  CHECK(b.coeff({1}) == doctest::Approx(-1.0));
  const auto c = interior(e(L2, {0}), e(L2, {0, 1, 2}));
  CHECK(c.coeff({1, 2}) == doctest::Approx(1.0));
  CHECK(c.coefficient_norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(interior(e(E3, {1, 2}), e(E3, {1})), DomainError);
}

TEST_CASE("vector into 2-vector matches the matrix contraction") {
  Rng rng(3);
  const auto l = random_multivector(E5, 2, rng);
  const Eigen::VectorXd v = random_gaussian(5, rng);
  const Eigen::VectorXd direct = interior(Multivectord::vector(E5, v), l).as_vector();
  const Eigen::VectorXd via_matrix = l.as_antisymmetric().transpose() * v;
  CHECK((direct - via_matrix).norm() < 1e-13);
}

TEST_CASE("interior equals the adjoint-identity solution") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const Metric m = (trial % 2) ? Metric::lorentz(n) : Metric::euclidean(n);
    const int gv = 1 + static_cast<int>(rng() % std::min(4, m.ambient()));
    const int gx = static_cast<int>(rng() % (gv + 1));
    const auto x = random_multivector(m, gx, rng);
    const auto v = random_multivector(m, gv, rng);
    const auto fast = interior(x, v);
    const auto slow = interior_by_adjoint(x, v);
    CHECK((fast - slow).coefficient_norm() <= 1e-12 * (1 + slow.coefficient_norm()));
  }
}

TEST_CASE("graded anticommutativity") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Metric m = Metric::euclidean(6);
    const int gx = static_cast<int>(rng() % 4), gy = static_cast<int>(rng() % 3);
    const auto x = random_multivector(m, gx, rng);
    const auto y = random_multivector(m, gy, rng);
    const double sign = ((gx * gy) % 2) ? -1.0 : 1.0;
    CHECK(((x ^ y) - sign * (y ^ x)).coefficient_norm() < 1e-12);
  }
}

TEST_CASE("inner of blades equals the Gram determinant") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Metric m = (trial % 2) ? Metric::lorentz(5) : Metric::euclidean(6);
    const int g = 1 + static_cast<int>(rng() % 4);
    std::vector<Eigen::VectorXd> us, vs;
    const auto x = random_blade(m, g, rng, &us);
    const auto y = random_blade(m, g, rng, &vs);
    Eigen::MatrixXd gram(g, g);
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) gram(i, j) = vector_dot(m, us[i], vs[j]);
    CHECK(inner(x, y) == doctest::Approx(gram.determinant()).epsilon(1e-10));
  }
}

TEST_CASE("decomposability") {
  CHECK(is_decomposable(e(E4, {1, 2}), 1e-12));
  CHECK_FALSE(is_decomposable(e(E4, {1, 2}) + e(E4, {3, 4}), 1e-12));
  CHECK(is_decomposable(Multivectord(E4, 2), 1e-12));
  Rng rng(2);
  CHECK(is_decomposable(random_blade(E5, 3, rng), 1e-10));
  CHECK_FALSE(is_decomposable(e(E5, {1, 2, 3}) + e(E5, {1, 4, 5}) * 0.0 + e(E5, {3, 4, 5}), 1e-10));
  CHECK_THROWS_AS(is_decomposable(e(E4, {1}), 1e-12), DomainError);
}

TEST_CASE("projection onto the square of a 3-space") {
  const auto v = e(E5, {1, 2, 3});
  const auto p = project_onto_plane_square(e(E5, {1, 2}) + e(E5, {3, 4}), v);
  CHECK((p - e(E5, {1, 2})).coefficient_norm() < 1e-12);
  const auto inside = e(E5, {1, 3}) * 2.0 - e(E5, {2, 3});
  CHECK((project_onto_plane_square(inside, v) - inside).coefficient_norm() < 1e-12);
  CHECK(project_onto_plane_square(e(E5, {4, 5}), v).coefficient_norm() < 1e-12);
  CHECK_THROWS_AS(project_onto_plane_square(inside, Multivectord(E5, 3)), DomainError);
  CHECK_THROWS_AS(project_onto_plane_square(inside, e(E5, {1, 2, 3}) + e(E5, {3, 4, 5})), DomainError);

  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto l = random_multivector(E5, 2, rng);
    const auto blade = random_blade(E5, 3, rng);
    const auto once = project_onto_plane_square(l, blade);
    CHECK((project_onto_plane_square(once, blade) - once).coefficient_norm() < 1e-10);
    CHECK(once.coefficient_norm() <= l.coefficient_norm() + 1e-12);
  }
}

TEST_CASE("spatial embedding flips the square by (-1)^g") {
  Rng rng(4);
  for (int g = 1; g <= 3; ++g) {
    const auto x = random_multivector(E4, g, rng);
    const double sign = (g % 2) ? -1.0 : 1.0;
    CHECK(square(embed_spatial(x)) == doctest::Approx(sign * square(x)));
    CHECK((spatial_part(embed_spatial(x)) - x).coefficient_norm() == 0.0);
  }
  CHECK(square(embed_spatial(e(E3, {1}))) == doctest::Approx(-1.0));
  CHECK(square(embed_spatial(e(E3, {1, 2}))) == doctest::Approx(1.0));
  CHECK(square(embed_spatial(e(E3, {1, 2, 3}))) == doctest::Approx(-1.0));
}

TEST_CASE("span basis orientation and induced transforms") {
  Rng rng(9);
  const auto x = random_blade(E5, 3, rng);
  const auto frame = span_basis(x);
  auto rebuilt = Multivectord::vector(E5, frame.col(0)) ^ Multivectord::vector(E5, frame.col(1)) ^
                 Multivectord::vector(E5, frame.col(2));
  CHECK(rebuilt.coeffs().dot(x.coeffs()) > 0);
  CHECK((rebuilt * x.coefficient_norm() - x).coefficient_norm() < 1e-10);

  const Eigen::MatrixXd m = Eigen::MatrixXd::Random(5, 5);
  const Eigen::VectorXd u = random_gaussian(5, rng), w = random_gaussian(5, rng);
  const auto uw = Multivectord::vector(E5, u) ^ Multivectord::vector(E5, w);
  const auto image = Multivectord::vector(E5, m * u) ^ Multivectord::vector(E5, m * w);
  CHECK((transform(m, uw) - image).coefficient_norm() < 1e-12);
}
