#include "doctest.h"

#include <random>
#include <set>

#include "exrep/exceptional.hpp"
#include "test_support.hpp"

using namespace exrep;
using exrep::testing::load_algebra;

namespace {

RightModule named(const AlgebraPtr& a, const std::string& spec) { return *named_module(a, spec); }

std::vector<RightModule> seq(const AlgebraPtr& a, std::initializer_list<const char*> specs) {
  std::vector<RightModule> out;
  for (const char* s : specs) out.push_back(named(a, s));
  return out;
}

bool has_witness(const ExceptionalReport& r, const std::string& cond, std::size_t i, std::size_t j) {
  for (const auto& w : r.witnesses)
    if (w.condition == cond && w.i == i && w.j == j) return true;
  return false;
}

// Sorted names of a sequence, for comparison against hand-written goldens.
std::vector<std::string> names(const CesEnumeration& c, const std::vector<std::size_t>& s) {
  std::vector<std::string> out;
  for (auto k : s) out.push_back(module_name(c.exceptional[k]));
  return out;
}

}  // namespace

TEST_CASE("single exceptional modules") {
  auto a3 = load_algebra("A3.alg");
  for (std::size_t v = 0; v < 3; ++v) {
    auto r = is_exceptional(simple_module(a3, v));
    CHECK(r.verdict);
    CHECK(r.certainty == Certainty::Certified);
    auto p = is_exceptional(projective_module(a3, v));
    CHECK(p.verdict);
  }
  // Self-injective with rad^2 = 0: Omega^3 S1 = S1, so Ext^3(S1, S1) = K.
  auto c = load_algebra("cycle3_rad2.alg");
  auto r = is_exceptional(simple_module(c, 0));
  CHECK_FALSE(r.verdict);
  REQUIRE(r.witnesses.size() == 1);
  CHECK(r.witnesses[0].condition == "E2");
  CHECK(r.witnesses[0].n == 3);
  CHECK(r.witnesses[0].dim == 1);
  // Not a brick: E1 witness with the endomorphism dimension.
  auto d = is_exceptional(direct_sum(a3, {simple_module(a3, 0), simple_module(a3, 0)}));
  CHECK_FALSE(d.verdict);
  CHECK(has_witness(d, "E1", 1, 1));
}

TEST_CASE("exceptional sequence orientation") {
  auto a3 = load_algebra("A3.alg");
  // Hom(P1, S1) != 0 forbids P1 after S1; the reverse order is fine.
  CHECK(is_exceptional_sequence(seq(a3, {"proj:1", "simple:1"})).verdict);
  auto bad = is_exceptional_sequence(seq(a3, {"simple:1", "proj:1"}));
  CHECK_FALSE(bad.verdict);
  CHECK(has_witness(bad, "E1'", 1, 2));
  // Right modules: Omega S1 = P2, so Ext^1(S1, S2) != 0 and S2 cannot
  // precede S1.
  auto e = is_exceptional_sequence(seq(a3, {"simple:2", "simple:1"}));
  CHECK_FALSE(e.verdict);
  CHECK(has_witness(e, "E2'", 1, 2));
  CHECK(is_exceptional_sequence(seq(a3, {"simple:1", "simple:2"})).verdict);
  auto full = is_exceptional_sequence(seq(a3, {"simple:1", "simple:2", "simple:3"}));
  CHECK(full.verdict);
  CHECK(full.complete);
  CHECK_FALSE(is_exceptional_sequence(seq(a3, {"simple:1", "simple:1"})).verdict);
  CHECK_FALSE(is_exceptional_sequence(seq(a3, {"simple:3"})).complete);
}

TEST_CASE("report json follows the schema") {
  auto a3 = load_algebra("A3.alg");
  auto j = is_exceptional_sequence(seq(a3, {"simple:2", "simple:1"})).to_json();
  CHECK(j["verdict"] == false);
  CHECK(j["certainty"] == "Certified");
  CHECK(j["complete"] == false);
  REQUIRE(j["witnesses"].size() == 1);
  CHECK(j["witnesses"][0]["condition"] == "E2'");
  CHECK(j["witnesses"][0]["n"] == 1);
  CHECK(j.contains("subject"));
  CHECK(j.contains("images"));
}

TEST_CASE("semibricks") {
  auto a3 = load_algebra("A3.alg");
  CHECK(semibrick_report(seq(a3, {"simple:1", "simple:2", "simple:3"})).verdict);
  auto r = semibrick_report(seq(a3, {"proj:1", "simple:1"}));
  CHECK_FALSE(r.verdict);
  CHECK(has_witness(r, "semibrick", 1, 2));
  CHECK(is_semibrick(seq(a3, {"simple:1", "simple:2"})));
}

TEST_CASE("brick enumeration") {
  auto a3 = load_algebra("A3.alg");
  auto b = enumerate_bricks(a3);
  CHECK(b.complete);
  CHECK(b.bricks.size() == 6);
  auto am = load_algebra("A3_mod_alpha.alg");
  CHECK(enumerate_bricks(am).bricks.size() == 4);
  // Bricks are unique up to isomorphism.
  for (std::size_t i = 0; i < b.bricks.size(); ++i)
    for (std::size_t j = i + 1; j < b.bricks.size(); ++j) CHECK_FALSE(iso_test(b.bricks[i], b.bricks[j]));
  EnumerationConfig tiny;
  tiny.budget = 3;
  CHECK_FALSE(enumerate_bricks(a3, tiny).complete);
  EnumerationConfig rational;
  rational.field = FieldSpec{};
  CHECK_THROWS_AS(enumerate_bricks(a3, rational), ModuleError);
}

TEST_CASE("complete exceptional sequences of A3 / <alpha>") {
  auto am = load_algebra("A3_mod_alpha.alg");
  auto c = enumerate_ces(am);
  CHECK(c.complete);
  CHECK(c.exceptional.size() == 4);
  CHECK(c.uncertified_pairs == 0);
  CHECK(c.dropped_on_lift == 0);
  std::set<std::vector<std::string>> got;
  for (const auto& s : c.sequences) got.insert(names(c, s));
  const std::set<std::vector<std::string>> table = {
      {"(3)", "(2/3)", "(1)"}, {"(3)", "(1)", "(2/3)"}, {"(1)", "(3)", "(2/3)"},
      {"(2/3)", "(2)", "(1)"}, {"(2/3)", "(1)", "(2)"}, {"(1)", "(2/3)", "(2)"},
      {"(1)", "(2)", "(3)"},   {"(2)", "(1)", "(3)"},   {"(2)", "(3)", "(1)"}};
  CHECK(c.sequences.size() == 9);
  CHECK(got == table);
  // Every enumerated sequence passes the independent checker.
  for (const auto& s : c.sequences) {
    std::vector<RightModule> ms;
    for (auto k : s) ms.push_back(c.exceptional[k]);
    CHECK(is_exceptional_sequence(ms).verdict);
  }
}

TEST_CASE("complete exceptional sequences: counts") {
  // (n+1)^(n-1) for the linearly oriented A_n.
  CHECK(enumerate_ces(load_algebra("A3.alg")).sequences.size() == 16);
  auto one = build_algebra("algebra K\nfield Q\nvertices 1\nend\n");
  auto c = enumerate_ces(one);
  CHECK(c.exceptional.size() == 1);
  CHECK(c.sequences.size() == 1);
  // Self-injective algebra: no simple is exceptional, so no sequences.
  auto cyc = enumerate_ces(load_algebra("cycle3_rad2.alg"));
  CHECK(cyc.sequences.empty());
}

TEST_CASE("split theorem on A3 over A3 / <alpha>") {
  auto r = load_algebra("A3.alg");
  auto se = build_split_extension(r, {"alpha"});
  // Row (a): (3, 2/3, 1) maps to (3, 2/3, 1/2/3), exceptional.
  auto t = check_split_theorem(se, seq(se.a, {"simple:3", "proj:2", "simple:1"}));
  CHECK(t.hypotheses_certified);
  CHECK_FALSE(t.implication_violated);
  REQUIRE(t.conclusions.size() == 1);
  CHECK(t.conclusions[0].verdict);
  CHECK(t.conclusions[0].complete);
  CHECK(iso_test(t.conclusions[0].images[2], projective_module(r, 0)));
  // Row (f): (1, 2/3, 2).  Hypothesis (3) fails since 1 (x) Q = (2/3) and
  // Hom((2/3), (2/3)) != 0; the image (1/2/3, 2/3, 2) is not exceptional.
  auto f = check_split_theorem(se, seq(se.a, {"simple:1", "proj:2", "simple:2"}));
  CHECK_FALSE(f.hypotheses_certified);
  CHECK_FALSE(f.hypotheses[2].holds);
  CHECK_FALSE(f.conclusions[0].verdict);
  CHECK(has_witness(f.conclusions[0], "E1'", 1, 2));
  CHECK(f.to_json()["hypotheses"].size() == 4);
}

TEST_CASE("split theorem: hypothesis (2) fails for the rad^2 cycle") {
  auto r = load_algebra("cycle3_rad2.alg");
  auto se = build_split_extension(r, {"gamma"});
  auto t = check_split_theorem(se, seq(se.a, {"simple:3", "simple:2", "simple:1"}));
  CHECK_FALSE(t.hypotheses[1].holds);
  CHECK_FALSE(t.hypotheses_certified);
  CHECK_FALSE(t.implication_violated);
  // (1) (x) R has Ext^3 != 0 over R.
  auto img = se.apply(FunctorKind::TensorUpR, named(se.a, "simple:1"));
  CHECK_FALSE(is_exceptional(img).verdict);
}

TEST_CASE("recollement theorem") {
  auto am = load_algebra("A3_mod_alpha.alg");
  auto rec = build_recollement(am, {0});
  CHECK(rec.i_upper_exact);
  CHECK(rec.i_shriek_exact);
  std::vector<RightModule> xs, ys;
  for (std::size_t v = 0; v < rec.abar->vertex_count(); ++v) xs.push_back(simple_module(rec.abar, v));
  ys.push_back(simple_module(rec.atilde, 0));
  // Over Abar (vertices 2, 3 and beta) the order (2, 3) is exceptional.
  auto t = check_recollement_theorem(rec, xs, ys);
  CHECK(t.hypotheses_certified);
  CHECK_FALSE(t.implication_violated);
  for (const auto& id : t.identities) CHECK(id.holds);
  for (const auto& c : t.conclusions) CHECK(c.verdict);

  // KA3 with eps = {1}: i^* is not exact, the theorem does not apply.
  auto a3 = load_algebra("A3.alg");
  auto r1 = build_recollement(a3, {0});
  auto t1 = check_recollement_theorem(r1, {simple_module(r1.abar, 0)}, {simple_module(r1.atilde, 0)});
  CHECK_FALSE(t1.hypotheses_certified);
  CHECK_FALSE(t1.implication_violated);
}

TEST_CASE("sequence files") {
  auto a3 = load_algebra("A3.alg");
  auto s = parse_sequence_file(a3, "# row\nsimple:3\n\nproj:2  # comment\nsimple:1\n");
  REQUIRE(s.size() == 3);
  CHECK(iso_test(s[1], projective_module(a3, 1)));
  CHECK_THROWS_AS(parse_sequence_file(a3, "simple:9\n"), ParseError);
  CHECK_THROWS_AS(parse_sequence_file(a3, "no_such_file.mod\n"), ParseError);
}

TEST_CASE("Ext transfers along the projective 3-cycle extension") {
  // dim Ext^n_R(M (x) R, N (x) R) = dim Ext^n_A(M, Hom_R(R, N (x) R)), n <= 6.
  auto r = load_algebra("cycle3_ab.alg");
  auto se = build_split_extension(r, {"gamma"});
  REQUIRE(se.is_projective_left);
  auto samples = module_samples(se.a);
  for (const auto& m : samples)
    for (const auto& n : samples) {
      auto mr = se.apply(FunctorKind::TensorUpR, m);
      auto nr = se.apply(FunctorKind::TensorUpR, n);
      auto lhs = ext_dims(mr, nr, 6);
      auto rhs = ext_dims(m, se.apply(FunctorKind::ResSigma, nr), 6);
      CAPTURE(module_name(m));
      CAPTURE(module_name(n));
      CHECK(lhs.dims == rhs.dims);
    }
}

TEST_CASE("Ext transfer fails without projectivity") {
  auto r = load_algebra("cycle3_rad2.alg");
  auto se = build_split_extension(r, {"gamma"});
  auto s1 = simple_module(se.a, 0);
  auto up = se.apply(FunctorKind::TensorUpR, s1);
  CHECK(ext_dims(up, up, 3).dims[3] == 1);
  CHECK(ext_dims(s1, se.apply(FunctorKind::ResSigma, up), 3).dims[3] == 0);
}

TEST_CASE("theorem checkers never certify a false conclusion") {
  std::mt19937 rng(11);
  for (const auto& [file, arrow] : std::vector<std::pair<std::string, std::string>>{
           {"A3.alg", "alpha"}, {"cycle3_ab.alg", "gamma"}, {"cycle3_rad2.alg", "gamma"}}) {
    auto se = build_split_extension(load_algebra(file), {arrow});
    auto pool = module_samples(se.a);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<RightModule> s;
      for (std::size_t k = 0, len = 1 + trial % 3; k < len; ++k) s.push_back(pool[pick(rng)]);
      auto t = check_split_theorem(se, s);
      CHECK_FALSE(t.implication_violated);
      if (t.hypotheses_certified) CHECK(t.conclusions[0].verdict);
    }
  }
  for (const auto& [file, eps] : std::vector<std::pair<std::string, std::vector<std::size_t>>>{
           {"A3_mod_alpha.alg", {0}}, {"A3_mod_alpha.alg", {2}}, {"A3.alg", {1}}, {"A3_mod_alphabeta.alg", {1}}}) {
    auto rec = build_recollement(load_algebra(file), eps);
    auto xs = module_samples(rec.abar);
    auto ys = module_samples(rec.atilde);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      std::vector<RightModule> x{xs[k]}, y{ys[k % ys.size()]};
      if (k + 1 < xs.size()) x.push_back(xs[k + 1]);
      auto t = check_recollement_theorem(rec, x, y);
      CHECK_FALSE(t.implication_violated);
    }
  }
}

TEST_CASE("i_* and j_! are fully faithful on dimensions") {
  for (const auto& [file, eps] : std::vector<std::pair<std::string, std::vector<std::size_t>>>{
           {"A3.alg", {0}}, {"A3.alg", {2}}, {"A3_mod_alpha.alg", {0}}, {"cycle3_ab.alg", {1}}}) {
    auto rec = build_recollement(load_algebra(file), eps);
    auto xs = module_samples(rec.abar);
    auto ys = module_samples(rec.atilde);
    for (const auto& x : xs)
      for (const auto& x2 : xs)
        CHECK(hom_dim(x, x2) == hom_dim(rec.apply(FunctorKind::IStar, x), rec.apply(FunctorKind::IStar, x2)));
    for (const auto& y : ys)
      for (const auto& y2 : ys)
        CHECK(hom_dim(y, y2) == hom_dim(rec.apply(FunctorKind::JLower, y), rec.apply(FunctorKind::JLower, y2)));
  }
}
