#include "doctest.h"

#include "exrep/bimodule.hpp"
#include "test_support.hpp"

using namespace exrep;
using exrep::testing::load_algebra;

namespace {

bool iso(const RightModule& m, const RightModule& n) { return static_cast<bool>(iso_test(m, n)); }

std::vector<RightModule> thin_modules(const AlgebraPtr& a) {
  std::vector<RightModule> out;
  const std::size_t n = a->vertex_count();
  for (std::size_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t v = 0; v < n; ++v)
      if (mask & (1u << v)) s.push_back(v);
    try {
      out.push_back(thin_module(a, s));
    } catch (const ModuleError&) {
    }
  }
  return out;
}

std::vector<RightModule> fixtures(const AlgebraPtr& a) {
  auto out = thin_modules(a);
  for (std::size_t v = 0; v < a->vertex_count(); ++v) {
    out.push_back(projective_module(a, v));
    out.push_back(injective_module(a, v));
  }
  return out;
}

}  // namespace

TEST_CASE("regular bimodule: unit laws for tensor and Hom") {
  for (const char* name : {"A3.alg", "A3_mod_alphabeta.alg", "cycle3_rad2.alg", "cycle3_ab.alg"}) {
    auto a = load_algebra(name);
    Bimodule reg = regular_bimodule(a);
    CHECK(reg.dim() == a->dim());
    for (const auto& m : fixtures(a)) {
      CHECK(iso(tensor_with_bimodule(m, reg), m));
      CHECK(iso(hom_from_bimodule(reg, m), m));
    }
    CHECK(tensor_with_bimodule(RightModule::zero(a), reg).is_zero());
    CHECK(hom_from_bimodule(reg, RightModule::zero(a)).is_zero());
  }
}

TEST_CASE("bimodule constructor rejects a broken action") {
  auto a = load_algebra("A3.alg");
  Bimodule reg = regular_bimodule(a);
  std::vector<Matrix> left, right;
  for (std::size_t i = 0; i < a->dim(); ++i) {
    left.push_back(reg.left(i));
    right.push_back(reg.right(i));
  }
  auto alpha = *a->find_label("alpha");
  left[alpha] = Scalar(a->field(), 2L) * left[alpha];
  right[alpha] = Matrix(a->field(), a->dim(), a->dim());
  CHECK_THROWS_AS(Bimodule(a, a, reg.grades(), left, right), ModuleError);
}

TEST_CASE("one-sided module structures of the regular bimodule are projective") {
  auto a = load_algebra("cycle3_ab.alg");
  Bimodule reg = regular_bimodule(a);
  CHECK(is_projective_module(reg.as_right_module()));
  CHECK(is_projective_module(reg.as_left_module()));
  CHECK(reg.as_left_module().total_dim() == a->dim());
}

TEST_CASE("restriction of scalars") {
  auto r = load_algebra("cycle3_rad2.alg");
  auto se = build_split_extension(r, {"gamma"});
  // (1)_A pulled back to R is the simple (1)_R: gamma acts as zero.
  CHECK(iso(restrict_module(simple_module(se.a, 0), se.xi), thin_module(r, {0})));
  // Along xi then sigma is the identity on mod A.
  for (const auto& m : fixtures(se.a)) CHECK(iso(restrict_module(restrict_module(m, se.xi), se.sigma), m));

  auto a3 = load_algebra("A3.alg");
  auto rec = build_recollement(a3, {1, 2});
  CHECK(rec.abar->dim() == 1);
  CHECK(rec.atilde->dim() == 3);
  CHECK(iso(rec.apply(FunctorKind::IStar, simple_module(rec.abar, 0)), simple_module(a3, 0)));
}

TEST_CASE("split extension of the 3-cycle by gamma (radical square zero)") {
  auto r = load_algebra("cycle3_rad2.alg");
  auto se = build_split_extension(r, {"gamma"});
  CHECK(se.a->dim() == 5);
  CHECK(se.q.dim() == 1);
  CHECK_FALSE(se.is_projective_left);
  CHECK(verify_morphism(se.xi).empty());
  CHECK(verify_morphism(se.sigma).empty());

  using K = FunctorKind;
  // (1)_A (x) R ~ (1)_R, (1 2) ~ (1 2), (2 3) ~ (2 3), (3) (x) R ~ (3 1).
  CHECK(iso(se.apply(K::TensorUpR, simple_module(se.a, 0)), thin_module(r, {0})));
  CHECK(iso(se.apply(K::TensorUpR, thin_module(se.a, {0, 1})), thin_module(r, {0, 1})));
  CHECK(iso(se.apply(K::TensorUpR, thin_module(se.a, {1, 2})), thin_module(r, {1, 2})));
  CHECK(iso(se.apply(K::TensorUpR, simple_module(se.a, 2)), thin_module(r, {2, 0})));
  // Hom_R(_A R_R, M (x) R) is (1)_A for M = (1)_A; Hom_R(_A R_R, -) is restriction along sigma.
  auto m = simple_module(se.a, 0);
  auto mr = se.apply(K::TensorUpR, m);
  CHECK(iso(hom_from_bimodule(se.r_ar, mr), m));
  CHECK(iso(se.apply(K::ResSigma, mr), m));
}

TEST_CASE("split extension of the 3-cycle with only alpha*beta killed") {
  auto r = load_algebra("cycle3_ab.alg");
  auto se = build_split_extension(r, {"gamma"});
  CHECK(r->dim() == 9);
  CHECK(se.a->dim() == 5);
  // gamma, beta*gamma, gamma*alpha, beta*gamma*alpha all lie in the ideal.
  CHECK(se.q.dim() == 4);
  CHECK(se.is_projective_left);
  auto cover = top_and_cover(se.left_r());
  CHECK(cover.multiplicities == std::vector<std::size_t>{1, 1, 3});
  for (std::size_t v = 0; v < 3; ++v)
    CHECK(iso(se.apply(FunctorKind::TensorUpR, projective_module(se.a, v)), projective_module(r, v)));
}

TEST_CASE("split extension of K A3 by alpha") {
  auto r = load_algebra("A3.alg");
  auto se = build_split_extension(r, {"alpha"});
  CHECK(se.a->dim() == 4);
  CHECK(se.q.dim() == 2);
  CHECK(se.is_projective_left);
  // _A Q ~ _A(1)^2: both basis vectors have left grade 1 and the left module is projective.
  CHECK(se.q_aa.dim() == 2);
  CHECK(se.q_aa.with_left_grade(0).size() == 2);
  CHECK(is_projective_module(se.q_aa.as_left_module()));

  using K = FunctorKind;
  CHECK(iso(se.apply(K::TensorUpR, simple_module(se.a, 0)), projective_module(r, 0)));
  CHECK(iso(se.apply(K::TensorUpR, thin_module(se.a, {1, 2})), thin_module(r, {1, 2})));
  CHECK(iso(se.apply(K::TensorUpR, simple_module(se.a, 2)), simple_module(r, 2)));
  CHECK(iso(se.apply(K::TensorUpR, simple_module(se.a, 1)), simple_module(r, 1)));
  // (1) (x) Q ~ (2 3), and (2 3), (3), (2) are killed by - (x) Q.
  CHECK(iso(tensor_with_bimodule(simple_module(se.a, 0), se.q_aa), thin_module(se.a, {1, 2})));
  CHECK(tensor_with_bimodule(thin_module(se.a, {1, 2}), se.q_aa).is_zero());
  CHECK(tensor_with_bimodule(simple_module(se.a, 2), se.q_aa).is_zero());
  CHECK(tensor_with_bimodule(simple_module(se.a, 1), se.q_aa).is_zero());
}

TEST_CASE("split extension errors") {
  auto r = load_algebra("A3.alg");
  CHECK_THROWS_AS(build_split_extension(r, {"delta"}), AlgebraError);
}

TEST_CASE("split-extension functor identities and adjunctions") {
  using K = FunctorKind;
  for (const auto& [file, arrow] : std::vector<std::pair<std::string, std::string>>{
           {"cycle3_rad2.alg", "gamma"}, {"cycle3_ab.alg", "gamma"}, {"A3.alg", "alpha"}}) {
    CAPTURE(file);
    auto r = load_algebra(file);
    auto se = build_split_extension(r, {arrow});
    auto over_a = fixtures(se.a);
    auto over_r = fixtures(r);
    for (const auto& m : over_a) {
      auto up = se.apply(K::TensorUpR, m);
      CHECK(iso(se.apply(K::TensorDownA, up), m));
      CHECK(iso(se.apply(K::HomDown, se.apply(K::HomUp, m)), m));
      CHECK(up.total_dim() == m.total_dim() + tensor_with_bimodule(m, se.q_aa).total_dim());
    }
    for (std::size_t v = 0; v < se.a->vertex_count(); ++v)
      CHECK(iso(se.apply(K::TensorUpR, projective_module(se.a, v)), projective_module(r, v)));
    for (const auto& m : over_a)
      for (const auto& n : over_r) {
        // (- (x)_A R, res_sigma), (res_sigma, Hom_A(R, -)), (- (x)_R A, res_xi), (res_xi, Hom_R(A, -)).
        CHECK(hom_dim(se.apply(K::TensorUpR, m), n) == hom_dim(m, se.apply(K::ResSigma, n)));
        CHECK(hom_dim(se.apply(K::ResSigma, n), m) == hom_dim(n, se.apply(K::HomUp, m)));
        CHECK(hom_dim(se.apply(K::TensorDownA, n), m) == hom_dim(n, se.apply(K::ResXi, m)));
        CHECK(hom_dim(se.apply(K::ResXi, m), n) == hom_dim(m, se.apply(K::HomDown, n)));
      }
    CHECK(se.cache->size() > 0);
    CHECK(se.cache->hits() > 0);
  }
}

TEST_CASE("tensor_map is functorial and preserves exactness for a projective bimodule") {
  auto r = load_algebra("A3.alg");
  auto se = build_split_extension(r, {"alpha"});
  for (const auto& m : fixtures(se.a)) {
    auto id = tensor_map(m, m, identity_map(m), se.r_ar);
    auto mr = tensor_with_bimodule(m, se.r_ar);
    CHECK(id.total(mr, mr) == Matrix::identity(mr.field(), mr.total_dim()));
  }
  // _R A is not flat in general, but _A R is projective here: - (x)_A R is exact.
  std::uint32_t seed = 7;
  for (const auto& m : fixtures(se.a)) {
    ShortExact e = random_short_exact(m, seed++);
    REQUIRE(is_short_exact(e));
    ShortExact img{tensor_with_bimodule(e.sub, se.r_ar), tensor_with_bimodule(e.mid, se.r_ar),
                   tensor_with_bimodule(e.quot, se.r_ar), tensor_map(e.sub, e.mid, e.inc, se.r_ar),
                   tensor_map(e.mid, e.quot, e.proj, se.r_ar)};
    CHECK(is_short_exact(img));
  }
}

TEST_CASE("rad^2 cycle extension: - (x)_A R is not exact") {
  // _A R is not projective, so some injection of A-modules is not preserved.
  auto r = load_algebra("cycle3_rad2.alg");
  auto se = build_split_extension(r, {"gamma"});
  // 0 -> (3) -> (2 3) -> (2) -> 0 maps to (3 1) -> (2 3), which is not injective.
  auto p2 = thin_module(se.a, {1, 2});
  Submodule soc = generated_submodule(p2, Matrix::from_ints(se.a->field(), {{0, 1}}));
  REQUIRE(soc.module.total_dim() == 1);
  auto f = tensor_map(soc.module, p2, soc.inclusion, se.r_ar);
  auto src = tensor_with_bimodule(soc.module, se.r_ar);
  auto dst = tensor_with_bimodule(p2, se.r_ar);
  CHECK(src.total_dim() == 2);
  CHECK(rank(f.total(src, dst)) == 1);
}

TEST_CASE("recollements of K A3") {
  auto a = load_algebra("A3.alg");
  SUBCASE("eps = {2,3}") {
    auto rec = build_recollement(a, {1, 2});
    CHECK(rec.abar->vertex_count() == 1);
    CHECK(rec.atilde->dim() == 3);
    auto rep = verify_recollement_laws(rec, default_samples(rec));
    for (const auto& f : rep.failures) INFO(f.law << ": " << f.detail);
    CHECK(rep.ok());
    CHECK(rep.checks > 100);
    CHECK_FALSE(rep.jstar_note.empty());
  }
  SUBCASE("eps = {1}") {
    auto rec = build_recollement(a, {0});
    CHECK(rec.abar->vertex_count() == 2);
    CHECK(rec.abar->dim() == 3);
    CHECK_FALSE(rec.i_upper_exact);
    CHECK(rec.i_shriek_exact);
    CHECK(verify_recollement_laws(rec, default_samples(rec)).ok());
  }
  SUBCASE("eps = {3}") {
    auto rec = build_recollement(a, {2});
    CHECK(rec.i_upper_exact);
    CHECK_FALSE(rec.i_shriek_exact);
    CHECK(verify_recollement_laws(rec, default_samples(rec)).ok());
  }
  SUBCASE("eps = all vertices") {
    auto rec = build_recollement(a, {0, 1, 2});
    CHECK(rec.abar->dim() == 0);
    for (const auto& m : thin_modules(a)) {
      CHECK(rec.apply(FunctorKind::IUpperStar, m).is_zero());
      CHECK(rec.apply(FunctorKind::IShriek, m).is_zero());
    }
    CHECK(verify_recollement_laws(rec, default_samples(rec)).ok());
  }
}

TEST_CASE("recollement laws on quotients of K A3 and the 3-cycle") {
  for (const char* file : {"A3_mod_alpha.alg", "A3_mod_alphabeta.alg", "cycle3_rad2.alg", "cycle3_ab.alg"}) {
    auto a = load_algebra(file);
    for (std::vector<std::size_t> eps : {std::vector<std::size_t>{0}, {1}, {2}, {0, 2}}) {
      CAPTURE(file);
      CAPTURE(eps.front());
      auto rec = build_recollement(a, eps);
      auto rep = verify_recollement_laws(rec, default_samples(rec), 3);
      for (const auto& f : rep.failures) INFO(f.law << ": " << f.detail);
      CHECK(rep.ok());
    }
  }
}

TEST_CASE("recollement functor spot checks") {
  using K = FunctorKind;
  auto a = load_algebra("A3.alg");
  auto rec = build_recollement(a, {1, 2});
  for (const auto& n : fixtures(rec.atilde)) {
    CHECK(iso(rec.apply(K::JUpperStar, rec.apply(K::JLower, n)), n));
    CHECK(rec.apply(K::IUpperStar, rec.apply(K::JLower, n)).is_zero());
  }
  auto s1 = simple_module(rec.abar, 0);
  CHECK(iso(rec.apply(K::IShriek, rec.apply(K::IStar, s1)), s1));
  CHECK_THROWS_AS(rec.apply(K::TensorUpR, s1), ModuleError);
}

TEST_CASE("corrupted j_* bimodule is caught by the law checker") {
  auto a = load_algebra("A3.alg");
  auto rec = build_recollement(a, {1, 2});
  rec.aeps = direct_sum(rec.aeps, rec.aeps);
  rec.cache = std::make_shared<FunctorCache>();
  auto rep = verify_recollement_laws(rec, default_samples(rec));
  REQUIRE_FALSE(rep.ok());
  bool named = false;
  for (const auto& f : rep.failures) named = named || f.law.find("(j^*, j_*)") != std::string::npos;
  CHECK(named);
}

TEST_CASE("random short exact sequences") {
  auto a = load_algebra("cycle3_ab.alg");
  for (std::uint32_t seed = 0; seed < 10; ++seed)
    for (const auto& m : fixtures(a)) CHECK(is_short_exact(random_short_exact(m, seed)));
}
