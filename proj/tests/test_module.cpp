#include "doctest.h"

#include <cmath>
#include <functional>

#include "exrep/module.hpp"
#include "test_support.hpp"

using namespace exrep;
using exrep::testing::load_algebra;

namespace {

// Brute-force Hom oracle over F_p: enumerate every tuple of vertex matrices,
// count the intertwiners on all radical basis elements and return log_p of
// the count.  Independent of the linear solver.
std::size_t brute_force_hom_dim(const RightModule& m, const RightModule& n) {
  const auto& a = *m.algebra();
  const std::uint32_t p = m.field().prime;
  REQUIRE(p != 0);
  std::size_t entries = 0;
  for (std::size_t v = 0; v < a.vertex_count(); ++v) entries += m.dim(v) * n.dim(v);
  REQUIRE(entries <= 9);
  std::vector<long> digits(entries, 0);
  std::size_t count = 0;
  while (true) {
    ModuleMap f;
    std::size_t k = 0;
    for (std::size_t v = 0; v < a.vertex_count(); ++v) {
      Matrix b(m.field(), m.dim(v), n.dim(v));
      for (std::size_t i = 0; i < m.dim(v); ++i)
        for (std::size_t j = 0; j < n.dim(v); ++j) b(i, j) = Scalar(m.field(), digits[k++]);
      f.blocks.push_back(b);
    }
    bool ok = true;
    for (auto b : a.radical_basis()) {
      const auto& e = a.element(b);
      ok = ok && (m.action(b) * f.blocks[e.target] == f.blocks[e.source] * n.action(b));
    }
    count += ok;
    std::size_t i = 0;
    while (i < entries && ++digits[i] == static_cast<long>(p)) digits[i++] = 0;
    if (i == entries) break;
  }
  std::size_t d = 0;
  while (count > 1) {
    REQUIRE(count % p == 0);
    count /= p;
    ++d;
  }
  return d;
}

std::vector<std::vector<std::size_t>> nonempty_subsets(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t v = 0; v < n; ++v)
      if (mask & (1u << v)) s.push_back(v);
    out.push_back(s);
  }
  return out;
}

// All thin modules that satisfy the relations.
std::vector<RightModule> thin_modules(const AlgebraPtr& a) {
  std::vector<RightModule> out;
  for (const auto& s : nonempty_subsets(a->vertex_count())) {
    try {
      out.push_back(thin_module(a, s));
    } catch (const ModuleError&) {
    }
  }
  return out;
}

}  // namespace

TEST_CASE("named constructors") {
  auto a = load_algebra("A3_mod_alphabeta.alg");
  CHECK(projective_module(a, 0).dims() == std::vector<std::size_t>{1, 1, 0});
  CHECK(layer_label(projective_module(a, 0)) == "1/2");

  auto r = load_algebra("cycle3_rad2.alg");
  CHECK(projective_module(r, 2).dims() == std::vector<std::size_t>{1, 0, 1});
  CHECK(layer_label(projective_module(r, 2)) == "3/1");

  auto kq = load_algebra("A3.alg");
  auto t = thin_module(kq, {0, 1, 2});
  CHECK(t.action(*kq->find_label("alpha")) == Matrix::identity(kq->field(), 1));
  CHECK(t.action(*kq->find_label("beta")) == Matrix::identity(kq->field(), 1));
  CHECK(layer_label(t) == "1/2/3");
  CHECK_THROWS_AS(thin_module(a, {0, 1, 2}), ModuleError);

  // inj:v at w has dimension = number of paths w -> v.
  CHECK(injective_module(kq, 0).dims() == std::vector<std::size_t>{1, 0, 0});
  CHECK(injective_module(kq, 2).dims() == std::vector<std::size_t>{1, 1, 1});
  CHECK(iso_test(injective_module(kq, 2), t));
  CHECK(iso_test(injective_module(kq, 1), thin_module(kq, {0, 1})));

  CHECK(named_module(kq, "simple:2")->dims() == std::vector<std::size_t>{0, 1, 0});
  CHECK(named_module(kq, "thin:2,3")->dims() == std::vector<std::size_t>{0, 1, 1});
  CHECK_FALSE(named_module(kq, "nonsense"));
  CHECK_THROWS_AS(named_module(kq, "proj:9"), ModuleError);
}

TEST_CASE("explicit modules are checked") {
  auto a = load_algebra("A3_mod_alphabeta.alg");
  auto alpha = *a->find_label("alpha"), beta = *a->find_label("beta");
  auto one = Matrix::identity(a->field(), 1);
  CHECK_THROWS_AS(RightModule::from_generators(a, {1, 1, 1}, {{alpha, one}, {beta, one}}), ModuleError);
  CHECK_NOTHROW(RightModule::from_generators(a, {1, 1, 1}, {{alpha, one}}));
  CHECK_THROWS_AS(RightModule::from_generators(a, {1, 1}, {}), ModuleError);
  try {
    std::vector<Matrix> actions(a->dim(), Matrix());
    actions[alpha] = Matrix::identity(a->field(), 2);
    RightModule bad(a, {1, 1, 0}, actions);
    FAIL("expected a shape error");
  } catch (const ModuleError& e) {
    CHECK(std::string(e.what()).find("alpha") != std::string::npos);
  }
}

TEST_CASE("hom dimensions agree with the brute-force oracle over F3") {
  for (auto file : {"A3.alg", "A3_mod_alphabeta.alg", "A3_mod_alpha.alg", "cycle3_rad2.alg"}) {
    CAPTURE(file);
    auto p = parse_algebra_file(testing::read_fixture(file));
    p.field = FieldSpec::prime_field(3);
    auto a = build_algebra(p);
    std::vector<RightModule> mods = thin_modules(a);
    for (std::size_t v = 0; v < a->vertex_count(); ++v) mods.push_back(projective_module(a, v));
    for (const auto& m : mods)
      for (const auto& n : mods) {
        std::size_t entries = 0;
        for (std::size_t v = 0; v < a->vertex_count(); ++v) entries += m.dim(v) * n.dim(v);
        if (entries > 6) continue;
        CAPTURE(m.label());
        CAPTURE(n.label());
        auto basis = hom_basis(m, n);
        CHECK(basis.size() == brute_force_hom_dim(m, n));
        for (const auto& f : basis) CHECK(is_homomorphism(m, n, f));
      }
  }
}

TEST_CASE("hom, bricks and semibricks over K A3") {
  auto a = load_algebra("A3.alg");
  auto t123 = thin_module(a, {0, 1, 2});
  auto s3 = simple_module(a, 2);
  // Maps out of the thin module land in its quotients (tops 1, 1/2, 1/2/3),
  // so none reaches (3); the socle inclusion gives Hom((3), (1/2/3)) = K.
  CHECK(hom_dim(t123, s3) == 0);
  CHECK(hom_dim(s3, t123) == 1);
  CHECK(brick_report(s3).is_brick);
  auto ss = direct_sum(a, {s3, s3});
  CHECK(brick_report(ss).end_dim == 4);
  CHECK_FALSE(brick_report(ss).is_brick);
  CHECK(brick_report(t123).end_dim == 1);
  CHECK(is_semibrick({simple_module(a, 0), simple_module(a, 1), s3}));
  CHECK(is_semibrick({t123}));
  CHECK_FALSE(is_semibrick({t123, s3}));
  CHECK(is_semibrick({}));
}

TEST_CASE("hom dimension is additive") {
  auto a = load_algebra("A3_mod_alphabeta.alg");
  auto mods = thin_modules(a);
  for (std::size_t v = 0; v < a->vertex_count(); ++v) mods.push_back(injective_module(a, v));
  for (const auto& x : mods)
    for (const auto& y : mods)
      for (const auto& n : mods) {
        auto sum = direct_sum(a, {x, y});
        CHECK(hom_dim(sum, n) == hom_dim(x, n) + hom_dim(y, n));
        CHECK(hom_dim(n, sum) == hom_dim(n, x) + hom_dim(n, y));
      }
  CHECK(direct_sum(a, {RightModule::zero(a), RightModule::zero(a)}).is_zero());
}

TEST_CASE("isomorphism tests") {
  auto a = load_algebra("A3.alg");
  auto t12 = thin_module(a, {0, 1});
  CHECK(iso_test(t12, t12));
  auto seven = RightModule::from_generators(a, {1, 1, 0}, {{*a->find_label("alpha"), Matrix::from_ints(a->field(), {{7}})}});
  auto iso = iso_test(t12, seven);
  REQUIRE(iso);
  CHECK(is_isomorphism(t12, seven, *iso.map));
  CHECK_FALSE(iso_test(t12, thin_module(a, {1, 2})));
  CHECK_FALSE(iso_test(t12, direct_sum(a, {simple_module(a, 0), simple_module(a, 1)})));

  // Random change of basis on a 2-dimensional vertex space.
  auto m = direct_sum(a, {thin_module(a, {0, 1, 2}), thin_module(a, {1, 2})});
  auto g = [&](std::vector<std::vector<long>> rows) { return Matrix::from_ints(a->field(), rows); };
  auto twisted = change_basis(m, {g({{3}}), g({{1, 2}, {1, 3}}), g({{2, 5}, {1, 3}})});
  auto found = iso_test(m, twisted);
  REQUIRE(found);
  CHECK(is_isomorphism(m, twisted, *found.map));
}

TEST_CASE("projective covers") {
  auto r = load_algebra("cycle3_rad2.alg");
  auto s1 = simple_module(r, 0);
  auto tc = top_and_cover(s1);
  CHECK(tc.multiplicities == std::vector<std::size_t>{1, 0, 0});
  CHECK(iso_test(tc.cover, projective_module(r, 0)));
  CHECK(is_homomorphism(tc.cover, s1, tc.cover_map));

  auto p2 = projective_module(r, 1);
  auto tp = top_and_cover(p2);
  CHECK(tp.multiplicities == std::vector<std::size_t>{0, 1, 0});
  CHECK(tp.cover.total_dim() == p2.total_dim());
  CHECK(is_projective_module(p2));
  CHECK_FALSE(is_projective_module(s1));

  auto z = top_and_cover(RightModule::zero(r));
  CHECK(z.cover.is_zero());
  CHECK(is_projective_module(RightModule::zero(r)));

  auto kq = load_algebra("A3.alg");
  CHECK(is_projective_module(simple_module(kq, 2)));
  CHECK_FALSE(is_projective_module(simple_module(kq, 0)));
}

TEST_CASE("minimal resolutions") {
  auto kq = load_algebra("A3.alg");
  auto rp = minimal_resolution(projective_module(kq, 0));
  CHECK(rp.status == ResolutionStatus::FinitePd);
  CHECK(rp.pd == 0);

  auto a = load_algebra("A3_mod_alphabeta.alg");
  auto ra = minimal_resolution(simple_module(a, 0));
  CHECK(ra.status_string() == "FinitePd(2)");
  REQUIRE(ra.complex.terms.size() == 3);
  CHECK(layer_label(ra.complex.terms[0]) == "1/2");
  CHECK(layer_label(ra.complex.terms[1]) == "2/3");
  CHECK(layer_label(ra.complex.terms[2]) == "3");

  auto r = load_algebra("cycle3_rad2.alg");
  auto rr = minimal_resolution(simple_module(r, 0));
  CHECK(rr.status == ResolutionStatus::Periodic);
  CHECK(rr.lead == 0);
  CHECK(rr.period == 3);
  auto long_res = minimal_resolution(simple_module(r, 0), 24, 5);
  REQUIRE(long_res.complex.terms.size() >= 5);
  std::vector<std::string> covers;
  for (std::size_t k = 0; k < 5; ++k) covers.push_back(layer_label(long_res.complex.terms[k]));
  CHECK(covers == std::vector<std::string>{"1/2", "2/3", "3/1", "1/2", "2/3"});

  // Exactness by rank arithmetic and minimality: kernels inside the radical.
  for (std::size_t k = 1; k < long_res.complex.terms.size(); ++k) {
    const auto& pk = long_res.complex.terms[k];
    const auto& pk1 = long_res.complex.terms[k - 1];
    const auto& below = k == 1 ? long_res.complex.resolved : long_res.complex.terms[k - 2];
    Matrix dk = long_res.complex.differentials[k].total(pk, pk1);
    Matrix dk1 = long_res.complex.differentials[k - 1].total(pk1, below);
    CHECK((dk * dk1).is_zero());
    CHECK(rank(dk) + rank(dk1) == pk1.total_dim());
    auto rad = radical_submodule(pk1);
    CHECK(rank(dk) <= rad.module.total_dim());
    Subspace im = Subspace::span(dk);
    Subspace radspace = Subspace::span(rad.inclusion.total(rad.module, pk1));
    CHECK(radspace.contains(im));
  }
}

TEST_CASE("Ext over the 3-cycle with radical square zero") {
  auto r = load_algebra("cycle3_rad2.alg");
  auto s1 = simple_module(r, 0);
  auto e = ext_dims(s1, s1, 6);
  CHECK(e.dims == std::vector<std::size_t>{1, 0, 0, 1, 0, 0, 1});
  CHECK(e.certainty == ExtCertainty::EventuallyPeriodic);
  CHECK(e.first_nonzero == 3);
  CHECK_FALSE(e.higher_vanish_certified);

  auto a = load_algebra("A3_mod_alphabeta.alg");
  auto sa = simple_module(a, 0);
  auto ea = ext_dims(sa, sa, 4);
  CHECK(ea.dims == std::vector<std::size_t>{1, 0, 0, 0, 0});
  CHECK(ea.certainty == ExtCertainty::AllHigherVanish);
  CHECK(ea.higher_vanish_certified);
  // Ext^2(S1, S3) = K from the length-two resolution.
  CHECK(ext_dims(sa, simple_module(a, 2), 3).dims == std::vector<std::size_t>{0, 0, 1, 0});
}

TEST_CASE("Ext^0 equals Hom and the hereditary Euler form holds over K A3") {
  auto a = load_algebra("A3.alg");
  auto mods = thin_modules(a);
  REQUIRE(mods.size() == 7);  // includes the decomposable thin:1,3
  for (const auto& m : mods)
    for (const auto& n : mods) {
      auto e = ext_dims(m, n, 4);
      CHECK(e.dims[0] == hom_dim(m, n));
      long euler = 0;
      for (std::size_t v = 0; v < 3; ++v) euler += static_cast<long>(m.dim(v) * n.dim(v));
      euler -= static_cast<long>(m.dim(0) * n.dim(1) + m.dim(1) * n.dim(2));
      CHECK(static_cast<long>(e.dims[0]) - static_cast<long>(e.dims[1]) == euler);
      for (std::size_t k = 2; k <= 4; ++k) CHECK(e.dims[k] == 0);
    }
}

TEST_CASE("Ext from padded resolutions agrees with the minimal one") {
  for (auto file : {"A3.alg", "A3_mod_alphabeta.alg", "cycle3_rad2.alg", "cycle3_ab.alg"}) {
    CAPTURE(file);
    auto a = load_algebra(file);
    auto mods = thin_modules(a);
    for (const auto& m : mods) {
      auto res = minimal_resolution(m, 24, 5);
      if (res.complex.terms.size() < 2) continue;
      for (std::size_t k = 1; k < res.complex.terms.size(); ++k) {
        auto padded = pad_complex(res.complex, k, projective_module(a, k % a->vertex_count()));
        for (const auto& n : mods) {
          CAPTURE(m.label());
          CAPTURE(n.label());
          CHECK(ext_dims_from_complex(padded, n, 3) == ext_dims_from_complex(res.complex, n, 3));
        }
      }
    }
  }
}

TEST_CASE("submodules, quotients and kernels") {
  auto a = load_algebra("A3.alg");
  auto p1 = projective_module(a, 0);
  // The radical of P1 is P2.
  auto rad = radical_submodule(p1);
  CHECK(iso_test(rad.module, projective_module(a, 1)));
  auto q = quotient_module(p1, rad);
  CHECK(iso_test(q.module, simple_module(a, 0)));
  CHECK(is_homomorphism(p1, q.module, q.projection));
  auto k = kernel(p1, q.module, q.projection);
  CHECK(k.module.dims() == rad.module.dims());
  Matrix gen(a->field(), 1, p1.total_dim());
  gen(0, p1.offset(1)) = Scalar::one(a->field());
  auto sub = generated_submodule(p1, gen);
  CHECK(sub.module.dims() == std::vector<std::size_t>{0, 1, 1});
  CHECK(is_homomorphism(sub.module, p1, sub.inclusion));
}

TEST_CASE("module files round-trip") {
  auto a = load_algebra("A3.alg");
  auto m = RightModule::from_generators(a, {1, 2, 1},
                                        {{*a->find_label("alpha"), Matrix::from_ints(a->field(), {{1, 2}})},
                                         {*a->find_label("beta"), Matrix::from_ints(a->field(), {{1}, {-1}})}});
  auto text = format_module(m, "M");
  CHECK(text == "module M over A3\ndim 1 2 1\nmap alpha [[1, 2]]\nmap beta [[1], [-1]]\nend\n");
  auto back = parse_module_file(a, text);
  CHECK(back.fingerprint() == m.fingerprint());
  CHECK(back.label() == "M");

  CHECK_THROWS_AS(parse_module_file(a, "module M over B\ndim 1 0 0\nend\n"), ParseError);
  CHECK_THROWS_AS(parse_module_file(a, "module M over A3\ndim 1 1 0\nmap gamma [[1]]\nend\n"), ParseError);
  CHECK_THROWS_AS(parse_module_file(a, "module M over A3\ndim 1 1 0\nmap alpha [[1, 1]]\nend\n"), ParseError);
  CHECK_THROWS_AS(parse_module_file(a, "module M over A3\ndim 1 1\nend\n"), ParseError);
  auto zero_map_file = parse_module_file(a, "module Z over A3\ndim 1 1 0\nend\n");
  CHECK(hom_dim(zero_map_file, zero_map_file) == 2);
}
