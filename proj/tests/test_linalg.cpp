#include "doctest.h"

#include "exrep/linalg.hpp"

using namespace exrep;

namespace {

const FieldSpec kQ = FieldSpec::rationals();

Matrix ints(const std::vector<std::vector<long>>& rows) { return Matrix::from_ints(kQ, rows); }

}  // namespace

TEST_CASE("rank, kernel and image of small matrices") {
  auto id = rank_kernel_image(Matrix::identity(kQ, 2));
  CHECK(id.rank == 2);
  CHECK(id.kernel.dim() == 0);
  CHECK(id.image.dim() == 2);

  auto zero = rank_kernel_image(Matrix(kQ, 2, 2));
  CHECK(zero.rank == 0);
  CHECK(zero.kernel.dim() == 2);

  // Hand elimination: x*[[1,2],[2,4]] = 0 iff x1 = -2 x2, so the kernel is
  // spanned by (2,-1); canonical echelon form is (1,-1/2).
  auto r = rank_kernel_image(ints({{1, 2}, {2, 4}}));
  CHECK(r.rank == 1);
  REQUIRE(r.kernel.dim() == 1);
  CHECK(r.kernel.basis().to_string() == "[[1, -1/2]]");
  std::vector<Scalar> v{Scalar(kQ, 2L), Scalar(kQ, -1L)};
  CHECK(r.kernel.contains(v));
}

TEST_CASE("rank plus nullity equals the row count") {
  for (const auto& m : {ints({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}), ints({{0, 0}, {1, 1}, {2, 2}}),
                        ints({{1, 0, 0, 1}}), ints({{3}, {0}, {5}})}) {
    auto r = rank_kernel_image(m);
    CHECK(r.rank + r.kernel.dim() == m.rows());
    CHECK(r.image.dim() == r.rank);
    if (r.kernel.dim() > 0)
      CHECK(mul_row(r.kernel.basis().row(0), m) == std::vector<Scalar>(m.cols(), Scalar::zero(kQ)));
  }
}

TEST_CASE("echelon canonicalization is independent of the spanning set") {
  auto a = Subspace::span(ints({{1, 1, 0}, {0, 1, 1}}));
  auto b = Subspace::span(ints({{1, 2, 1}, {2, 1, -1}, {1, 0, -1}}));
  CHECK(a == b);
  CHECK(Subspace::span(a.basis()) == a);
}

TEST_CASE("solve_right") {
  auto b = ints({{3, 4}});
  auto s = solve_right(Matrix::identity(kQ, 2), b);
  REQUIRE(s.particular);
  CHECK(*s.particular == b);

  CHECK_FALSE(solve_right(Matrix(kQ, 2, 2), b).particular);

  auto t = solve_right(ints({{1}, {1}}), ints({{1}}));
  REQUIRE(t.particular);
  CHECK(t.kernel.dim() == 1);
  CHECK((*t.particular * ints({{1}, {1}})) == ints({{1}}));

  CHECK_THROWS_AS(solve_right(ints({{1, 2}}), ints({{1}})), LinalgError);
}

TEST_CASE("quotient_with_section identities") {
  auto q0 = quotient_with_section(3, Subspace(kQ, 3));
  CHECK(q0.dim == 3);
  CHECK(q0.projection == Matrix::identity(kQ, 3));
  CHECK(q0.section == Matrix::identity(kQ, 3));

  CHECK(quotient_with_section(3, Subspace::whole(kQ, 3)).dim == 0);

  auto w = Subspace::span(ints({{1, 1, 0}}));
  auto q = quotient_with_section(3, w);
  CHECK(q.dim == 2);
  CHECK(q.section * q.projection == Matrix::identity(kQ, 2));
  CHECK(mul_row(w.basis().row(0), q.projection) == std::vector<Scalar>(2, Scalar::zero(kQ)));
  CHECK(rank(Matrix::vstack(q.section, w.basis())) == 3);

  auto low = quotient_prefer_low(3, w);
  CHECK(low.kept == std::vector<std::size_t>{0, 2});
  CHECK(low.section * low.projection == Matrix::identity(kQ, 2));
}

TEST_CASE("prime field arithmetic") {
  const FieldSpec f5 = FieldSpec::prime_field(5);
  Scalar a(f5, 3L), b(f5, 4L);
  CHECK((a + b).to_string() == "2");
  CHECK((a * b).to_string() == "2");
  CHECK((a / b * b) == a);
  CHECK(Scalar(f5, -1L).to_string() == "4");
  CHECK_THROWS(FieldSpec::prime_field(6));
  CHECK_THROWS(a + Scalar(kQ, 1L));
  CHECK(FieldSpec::parse("F7").prime == 7);
  CHECK(FieldSpec::parse("Q").is_rational());
  auto m = Matrix::from_ints(FieldSpec::prime_field(2), {{1, 1}, {1, 1}});
  CHECK(rank(m) == 1);
}

TEST_CASE("rational literals") {
  CHECK(parse_rational("-6/4") == mpq_class(-3, 2));
  CHECK(Scalar(kQ, parse_rational("4/2")).to_string() == "2");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("x"));
}
