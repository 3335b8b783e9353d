#include "exrep/reproduce.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace exrep {

#ifndef EXREP_DEFAULT_DATA_DIR
#define EXREP_DEFAULT_DATA_DIR "data"
#endif

std::string default_data_dir() { return EXREP_DEFAULT_DATA_DIR; }

namespace {

const char* const kLocations[] = {
    "",
    "CES of K A3 / <alpha>: the nine-row table",
    "CES of K A3: 16 sequences",
    "split extension K A3 -> K A3 / <alpha>: marked rows map to CES",
    "tensor images under - (x)_A R: K A3 by alpha, rad^2 3-cycle by gamma",
    "rad^2 3-cycle by gamma: Ext^3 transfer fails, _A R not projective",
    "minimal resolution of (1) over the rad^2 3-cycle",
    "3-cycle with alpha*beta = 0 by gamma: _A R projective, P1+P2+P3^2",
    "property suite: unit laws, adjunctions, recollement laws, Euler form, padding",
    "recollements of K A3 (eps = {1}, {3}): images of CES under i_* and j_!",
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Fixtures {
  std::string dir;
  AlgebraPtr load(const std::string& name) const { return build_algebra(read_file(dir + "/" + name)); }
  std::string text(const std::string& name) const { return read_file(dir + "/" + name); }
};

bool iso(const RightModule& m, const RightModule& n) { return static_cast<bool>(iso_test(m, n)); }

RightModule spec_module(const AlgebraPtr& a, const std::string& spec) {
  auto m = named_module(a, spec);
  if (!m) throw ModuleError("unknown module spec '" + spec + "'");
  return m->with_label(spec);
}

std::vector<RightModule> spec_modules(const AlgebraPtr& a, const std::vector<std::string>& specs) {
  std::vector<RightModule> out;
  for (const auto& s : specs) out.push_back(spec_module(a, s));
  return out;
}

std::string tuple_name(const std::vector<RightModule>& seq) {
  std::string s = "(";
  for (std::size_t k = 0; k < seq.size(); ++k) s += (k ? ", " : "") + module_name(seq[k]);
  return s + ")";
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? sep : "") + parts[k];
  return out;
}

bool same_sequence(const std::vector<RightModule>& x, const std::vector<RightModule>& y) {
  if (x.size() != y.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (!iso(x[k], y[k])) return false;
  return true;
}

std::string first_witness(const std::vector<Witness>& ws) {
  if (ws.empty()) return "no witness";
  const auto& w = ws.front();
  std::string s = "at (" + std::to_string(w.i) + "," + std::to_string(w.j) + ")";
  if (w.uncertified) return s + " uncertified";
  if (w.n > 0) s += " n=" + std::to_string(w.n);
  return s + " dim=" + std::to_string(w.dim);
}

// Every ordered tuple of distinct exceptional modules that the enumeration
// did not emit must fail the direct check.
std::size_t rejected_but_valid(const CesEnumeration& c, std::size_t r) {
  std::set<std::vector<std::size_t>> emitted(c.sequences.begin(), c.sequences.end());
  std::size_t bad = 0;
  std::vector<std::size_t> idx(c.exceptional.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  std::vector<std::size_t> pick;
  std::function<void()> rec = [&]() {
    if (pick.size() == r) {
      if (emitted.count(pick)) return;
      std::vector<RightModule> ms;
      for (auto k : pick) ms.push_back(c.exceptional[k]);
      if (is_exceptional_sequence(ms).verdict) ++bad;
      return;
    }
    for (auto k : idx) {
      if (std::find(pick.begin(), pick.end(), k) != pick.end()) continue;
      pick.push_back(k);
      rec();
      pick.pop_back();
    }
  };
  if (r > 0) rec();
  return bad;
}

// ---------------------------------------------------------------- criteria

CriterionResult ces_table(const Fixtures& fx) {
  CriterionResult out{1, kLocations[1], false, {}, {}};
  auto a = fx.load("A3_mod_alpha.alg");
  auto rows = parse_ces_table(fx.text("ces_A3_mod_alpha.txt"));
  auto ces = enumerate_ces(a);
  std::vector<std::vector<RightModule>> expected;
  for (const auto& row : rows) expected.push_back(spec_modules(a, row.sequence));
  std::vector<bool> matched(rows.size(), false);
  std::vector<std::string> extra, missing;
  std::size_t recheck_failures = 0;
  for (const auto& s : ces.sequences) {
    std::vector<RightModule> ms;
    for (auto k : s) ms.push_back(ces.exceptional[k]);
    if (!is_exceptional_sequence(ms).verdict) ++recheck_failures;
    bool found = false;
    for (std::size_t r = 0; r < rows.size() && !found; ++r)
      if (!matched[r] && same_sequence(ms, expected[r])) matched[r] = found = true;
    if (!found) extra.push_back(tuple_name(ms));
  }
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (!matched[r]) missing.push_back("(" + rows[r].label + ") " + tuple_name(expected[r]));
  const std::size_t wrongly_rejected = rejected_but_valid(ces, a->vertex_count());
  out.pass = ces.complete && rows.size() == 9 && ces.sequences.size() == 9 && extra.empty() && missing.empty() &&
             recheck_failures == 0 && wrongly_rejected == 0;
  out.data = {{"sequences", ces.sequences.size()},
              {"table_rows", rows.size()},
              {"extra", extra},
              {"missing", missing},
              {"recheck_failures", recheck_failures},
              {"wrongly_rejected", wrongly_rejected},
              {"complete", ces.complete}};
  if (out.pass) {
    out.detail = "9 sequences over F2 (dim bound 1), re-verified over Q, equal to rows (a)-(i)";
  } else {
    out.detail = std::to_string(ces.sequences.size()) + " sequences vs " + std::to_string(rows.size()) + " rows";
    if (!missing.empty()) out.detail += "; missing " + join(missing, ", ");
    if (!extra.empty()) out.detail += "; extra " + join(extra, ", ");
    if (recheck_failures) out.detail += "; " + std::to_string(recheck_failures) + " fail the direct check";
    if (wrongly_rejected) out.detail += "; " + std::to_string(wrongly_rejected) + " valid tuples rejected";
  }
  return out;
}

CriterionResult ces_count(const Fixtures& fx) {
  CriterionResult out{2, kLocations[2], false, {}, {}};
  auto r = fx.load("A3.alg");
  auto ces = enumerate_ces(r);
  std::size_t recheck_failures = 0;
  for (const auto& s : ces.sequences) {
    std::vector<RightModule> ms;
    for (auto k : s) ms.push_back(ces.exceptional[k]);
    if (!is_exceptional_sequence(ms).verdict) ++recheck_failures;
  }
  const std::size_t wrongly_rejected = rejected_but_valid(ces, r->vertex_count());
  out.pass = ces.complete && ces.sequences.size() == 16 && recheck_failures == 0 && wrongly_rejected == 0;
  out.detail = std::to_string(ces.sequences.size()) + " sequences from " + std::to_string(ces.exceptional.size()) +
               " exceptional modules; " + std::to_string(recheck_failures) + " recheck failures, " +
               std::to_string(wrongly_rejected) + " wrongly rejected tuples";
  out.data = {{"sequences", ces.sequences.size()}, {"exceptional", ces.exceptional.size()}};
  return out;
}

CriterionResult split_theorem_rows(const Fixtures& fx) {
  CriterionResult out{3, kLocations[3], false, {}, {}};
  auto r = fx.load("A3.alg");
  auto se = build_split_extension(r, {"alpha"});
  auto rows = parse_ces_table(fx.text("ces_A3_mod_alpha.txt"));
  std::vector<std::string> failures;
  std::size_t marked = 0, violated = 0;
  nlohmann::json per_row = nlohmann::json::array();
  for (const auto& row : rows) {
    auto t = check_split_theorem(se, spec_modules(se.a, row.sequence));
    if (t.implication_violated) ++violated;
    const auto& concl = t.conclusions.front();
    const bool images_match = same_sequence(concl.images, spec_modules(r, row.image));
    per_row.push_back({{"row", row.label},
                       {"marked", row.marked},
                       {"hypotheses_certified", t.hypotheses_certified},
                       {"image", tuple_name(concl.images)},
                       {"image_matches_table", images_match},
                       {"image_is_ces", concl.verdict}});
    if (!row.marked) continue;
    ++marked;
    std::vector<std::string> why;
    for (const auto& h : t.hypotheses)
      if (!h.holds || h.certainty != Certainty::Certified) why.push_back("hypothesis " + h.id + " fails " + first_witness(h.witnesses));
    if (!images_match) why.push_back("image " + tuple_name(concl.images) + " differs from the table");
    if (!concl.verdict) why.push_back("image not exceptional, " + concl.witnesses.front().condition + " fails " +
                                                        first_witness(concl.witnesses));
    if (!why.empty()) failures.push_back("(" + row.label + "): " + join(why, "; "));
  }
  out.pass = marked == 5 && failures.empty() && violated == 0;
  out.detail = out.pass ? "5 marked rows: hypotheses certified, images match and are CES"
                        : std::to_string(failures.size()) + " of " + std::to_string(marked) +
                              " marked rows fail: " + join(failures, " | ");
  if (violated) out.detail += "; IMPLICATION VIOLATED on " + std::to_string(violated) + " rows";
  out.data = {{"rows", per_row}, {"implication_violations", violated}};
  return out;
}

CriterionResult tensor_goldens(const Fixtures& fx) {
  CriterionResult out{4, kLocations[4], false, {}, {}};
  struct Golden {
    std::string algebra, arrow, source, image;
  };
  const std::vector<Golden> goldens = {
      {"A3.alg", "alpha", "thin:1", "thin:1,2,3"},
      {"A3.alg", "alpha", "thin:2,3", "thin:2,3"},
      {"A3.alg", "alpha", "thin:3", "thin:3"},
      {"A3.alg", "alpha", "thin:2", "thin:2"},
      {"cycle3_rad2.alg", "gamma", "thin:1", "thin:1"},
      {"cycle3_rad2.alg", "gamma", "thin:1,2", "thin:1,2"},
      {"cycle3_rad2.alg", "gamma", "thin:2,3", "thin:2,3"},
      {"cycle3_rad2.alg", "gamma", "thin:3", "thin:3,1"},
  };
  std::vector<std::string> bad;
  for (const auto& g : goldens) {
    auto r = fx.load(g.algebra);
    auto se = build_split_extension(r, {g.arrow});
    auto img = se.apply(FunctorKind::TensorUpR, spec_module(se.a, g.source));
    if (!iso(img, spec_module(r, g.image)))
      bad.push_back(g.algebra + ": " + g.source + " (x) R = " + module_name(img) + ", expected " + g.image);
  }
  out.pass = bad.empty();
  out.detail = out.pass ? std::to_string(goldens.size()) + " images isomorphic to the expected modules" : join(bad, "; ");
  return out;
}

CriterionResult counterexample(const Fixtures& fx) {
  CriterionResult out{5, kLocations[5], false, {}, {}};
  auto r = fx.load("cycle3_rad2.alg");
  auto se = build_split_extension(r, {"gamma"});
  auto s1 = spec_module(se.a, "simple:1");
  auto up = se.apply(FunctorKind::TensorUpR, s1);
  auto lhs = ext_dims(up, up, 3);
  auto rhs = ext_dims(s1, se.apply(FunctorKind::ResSigma, up), 3);
  out.pass = iso(up, spec_module(r, "simple:1")) && lhs.dims[3] == 1 && rhs.dims[3] == 0 && !se.is_projective_left;
  out.detail = "dim Ext^3_R((1),(1)) = " + std::to_string(lhs.dims[3]) + ", dim Ext^3_A((1), Hom_R(R,(1)(x)R)) = " +
               std::to_string(rhs.dims[3]) + ", _A R projective: " + (se.is_projective_left ? "yes" : "no");
  out.data = {{"ext_r", lhs.dims}, {"ext_a", rhs.dims}, {"left_projective", se.is_projective_left}};
  return out;
}

CriterionResult resolution_golden(const Fixtures& fx) {
  CriterionResult out{6, kLocations[6], false, {}, {}};
  auto r = fx.load("cycle3_rad2.alg");
  auto res = minimal_resolution(simple_module(r, 0), kDefaultMaxSteps, 5);
  const std::vector<std::size_t> expected_tops = {0, 1, 2, 0, 1};
  bool covers = res.complex.terms.size() >= 5;
  std::vector<std::string> got;
  for (std::size_t k = 0; k < std::min<std::size_t>(5, res.complex.terms.size()); ++k) {
    got.push_back(module_name(res.complex.terms[k]));
    covers = covers && iso(res.complex.terms[k], projective_module(r, expected_tops[k]));
  }
  out.pass = covers && res.status == ResolutionStatus::Periodic && res.period == 3;
  out.detail = "covers " + join(got, ", ") + "; " + res.status_string();
  out.data = {{"covers", got}, {"status", res.status_string()}, {"period", res.period}};
  return out;
}

CriterionResult projective_extension(const Fixtures& fx) {
  CriterionResult out{7, kLocations[7], false, {}, {}};
  auto r = fx.load("cycle3_ab.alg");
  auto se = build_split_extension(r, {"gamma"});
  auto res = minimal_resolution(se.left_r(), kDefaultMaxSteps, 1);
  const auto& mult = res.cover_multiplicities.front();
  const std::vector<std::size_t> expected = {1, 1, 2};
  out.pass = se.is_projective_left && mult == expected;
  std::string m = "(";
  for (std::size_t k = 0; k < mult.size(); ++k) m += (k ? "," : "") + std::to_string(mult[k]);
  m += ")";
  out.detail = std::string("_A R projective: ") + (se.is_projective_left ? "yes" : "no") + "; multiplicities of P1,P2,P3 " +
               m + ", expected (1,1,2); dim R = " + std::to_string(r->dim()) + ", dim A = " +
               std::to_string(se.a->dim()) + ", dim Q = " + std::to_string(se.q.dim());
  out.data = {{"left_projective", se.is_projective_left}, {"multiplicities", mult}, {"expected", expected}};
  return out;
}

// Property suite.
struct Tally {
  std::size_t checks = 0;
  std::vector<std::string> violations;
  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok && violations.size() < 20) violations.push_back(what);
    if (!ok && violations.size() == 20) violations.push_back("...");
  }
};

long euler_form(const AlgebraPtr& a, const RightModule& m, const RightModule& n) {
  long e = 0;
  for (std::size_t v = 0; v < a->vertex_count(); ++v) e += static_cast<long>(m.dim(v) * n.dim(v));
  for (auto g : a->generators()) {
    const auto& b = a->element(g);
    if (b.degree == 1) e -= static_cast<long>(m.dim(b.source) * n.dim(b.target));
  }
  return e;
}

CriterionResult property_suite(const Fixtures& fx, const ReproduceOptions& opts) {
  CriterionResult out{8, kLocations[8], false, {}, {}};
  using K = FunctorKind;
  Tally units, adjunctions, laws, euler, padding;
  std::size_t random_used = 0, pairs_used = 0, recollements = 0;
  std::uint32_t seed = opts.seed;

  // (i) and (ii) on the three split extensions.
  const std::vector<std::pair<std::string, std::string>> extensions = {
      {"cycle3_rad2.alg", "gamma"}, {"cycle3_ab.alg", "gamma"}, {"A3.alg", "alpha"}};
  for (const auto& [file, arrow] : extensions) {
    auto r = fx.load(file);
    auto se = build_split_extension(r, {arrow});
    auto reg_a = regular_bimodule(se.a);
    auto over_a = random_modules(se.a, opts.random_modules, seed++);
    auto over_r = random_modules(r, opts.random_modules, seed++);
    random_used += over_a.size() + over_r.size();
    for (const auto& m : over_a) {
      const std::string w = file + " " + module_name(m);
      units.check(iso(tensor_with_bimodule(m, reg_a), m), "M (x)_A A != M: " + w);
      units.check(iso(hom_from_bimodule(reg_a, m), m), "Hom_A(A, M) != M: " + w);
      units.check(iso(se.apply(K::TensorDownA, se.apply(K::TensorUpR, m)), m), "(M (x) R) (x) A != M: " + w);
      units.check(iso(se.apply(K::HomDown, se.apply(K::HomUp, m)), m), "Hom(A, Hom(R, M)) != M: " + w);
    }
    for (std::size_t k = 0; k < std::min(over_a.size(), over_r.size()); ++k) {
      const auto& m = over_a[k];
      const auto& n = over_r[k];
      const std::string w = file + " " + module_name(m) + ", " + module_name(n);
      ++pairs_used;
      adjunctions.check(hom_dim(se.apply(K::TensorUpR, m), n) == hom_dim(m, se.apply(K::ResSigma, n)),
                        "(- (x) R, res_sigma): " + w);
      adjunctions.check(hom_dim(se.apply(K::ResSigma, n), m) == hom_dim(n, se.apply(K::HomUp, m)),
                        "(res_sigma, Hom_A(R, -)): " + w);
      adjunctions.check(hom_dim(se.apply(K::TensorDownA, n), m) == hom_dim(n, se.apply(K::ResXi, m)),
                        "(- (x) A, res_xi): " + w);
      adjunctions.check(hom_dim(se.apply(K::ResXi, m), n) == hom_dim(m, se.apply(K::HomDown, n)),
                        "(res_xi, Hom_R(A, -)): " + w);
    }
  }

  // (ii) recollement adjoint pairs and (iii) recollement laws.
  const std::vector<std::pair<std::string, std::vector<std::size_t>>> recs = {
      {"A3.alg", {0}},          {"A3.alg", {1}},          {"A3.alg", {2}},          {"A3.alg", {1, 2}},
      {"A3_mod_alpha.alg", {0}}, {"A3_mod_alpha.alg", {1}}, {"A3_mod_alpha.alg", {2}}, {"A3_mod_alpha.alg", {0, 1}}};
  for (const auto& [file, eps] : recs) {
    auto a = fx.load(file);
    auto rec = build_recollement(a, eps);
    ++recollements;
    std::string tag = file + " eps={";
    for (std::size_t k = 0; k < eps.size(); ++k) tag += (k ? "," : "") + a->vertices()[eps[k]];
    tag += "}";
    auto rep = verify_recollement_laws(rec, default_samples(rec), seed++);
    laws.checks += rep.checks;
    for (const auto& f : rep.failures) laws.check(false, tag + " " + f.law + ": " + f.detail);
    auto ma = random_modules(a, opts.random_modules, seed++);
    auto mb = random_modules(rec.abar, opts.random_modules, seed++);
    auto mt = random_modules(rec.atilde, opts.random_modules, seed++);
    random_used += ma.size() + mb.size() + mt.size();
    for (std::size_t k = 0; k < ma.size(); ++k) {
      const auto& m = ma[k];
      if (!mb.empty()) {
        const auto& x = mb[k % mb.size()];
        ++pairs_used;
        adjunctions.check(hom_dim(rec.apply(K::IUpperStar, m), x) == hom_dim(m, rec.apply(K::IStar, x)),
                          tag + " (i^*, i_*)");
        adjunctions.check(hom_dim(rec.apply(K::IStar, x), m) == hom_dim(x, rec.apply(K::IShriek, m)),
                          tag + " (i_*, i^!)");
      }
      if (!mt.empty()) {
        const auto& y = mt[k % mt.size()];
        adjunctions.check(hom_dim(rec.apply(K::JLower, y), m) == hom_dim(y, rec.apply(K::JUpperStar, m)),
                          tag + " (j_!, j^*)");
        adjunctions.check(hom_dim(rec.apply(K::JUpperStar, m), y) == hom_dim(m, rec.apply(K::JStar, y)),
                          tag + " (j^*, j_*)");
      }
    }
  }

  // (iv) Euler form of the hereditary K A3 on all thin pairs.
  {
    auto a = fx.load("A3.alg");
    std::vector<RightModule> thin;
    for (std::size_t mask = 1; mask < 8; ++mask) {
      std::vector<std::size_t> s;
      for (std::size_t v = 0; v < 3; ++v)
        if (mask >> v & 1) s.push_back(v);
      thin.push_back(thin_module(a, s));
    }
    ExtOracle oracle(4);
    for (const auto& m : thin)
      for (const auto& n : thin) {
        auto e = oracle.ext(m, n);
        const long lhs = static_cast<long>(e.dims[0]) - static_cast<long>(e.dims[1]);
        bool higher = e.higher_vanish_certified || e.first_nonzero == 1;
        for (std::size_t k = 2; k < e.dims.size(); ++k) higher = higher && e.dims[k] == 0;
        euler.check(lhs == euler_form(a, m, n) && higher,
                    "<" + module_name(m) + ", " + module_name(n) + ">: hom - ext1 = " + std::to_string(lhs) +
                        ", form = " + std::to_string(euler_form(a, m, n)));
      }
  }

  // (v) padded resolutions give the same Ext.
  for (const char* file : {"A3.alg", "A3_mod_alpha.alg", "A3_mod_alphabeta.alg", "cycle3_rad2.alg", "cycle3_ab.alg"}) {
    auto a = fx.load(file);
    auto samples = module_samples(a);
    for (const auto& m : samples) {
      auto res = minimal_resolution(m, kDefaultMaxSteps, 5);
      for (std::size_t k = 1; k <= 2 && k < res.complex.terms.size(); ++k) {
        auto padded = pad_complex(res.complex, k, projective_module(a, k % a->vertex_count()));
        for (const auto& n : samples)
          padding.check(ext_dims_from_complex(res.complex, n, 4) == ext_dims_from_complex(padded, n, 4),
                        std::string(file) + " " + module_name(m) + " padded at " + std::to_string(k) + " vs " +
                            module_name(n));
      }
    }
  }

  auto part = [](const char* name, const Tally& t) {
    return nlohmann::json{{"part", name}, {"checks", t.checks}, {"violations", t.violations}};
  };
  out.data = {{"parts",
               {part("unit laws", units), part("adjunctions", adjunctions), part("recollement laws", laws),
                part("Euler form", euler), part("padding", padding)}},
              {"random_modules", random_used},
              {"pairs", pairs_used},
              {"recollements", recollements}};
  std::vector<std::string> bad;
  for (const Tally* t : {&units, &adjunctions, &laws, &euler, &padding})
    for (const auto& v : t->violations) bad.push_back(v);
  const bool enough = random_used >= 50 && pairs_used >= 50 && recollements >= 6;
  out.pass = bad.empty() && enough;
  out.detail = std::to_string(units.checks + adjunctions.checks + laws.checks + euler.checks + padding.checks) +
               " checks (" + std::to_string(random_used) + " random modules, " + std::to_string(pairs_used) +
               " pairs, " + std::to_string(recollements) + " recollements), " + std::to_string(bad.size()) +
               " violations";
  if (!bad.empty()) out.detail += ": " + join(bad, "; ");
  if (!enough) out.detail += "; sample sizes below the minimum";
  return out;
}

CriterionResult recollement_theorem(const Fixtures& fx) {
  CriterionResult out{9, kLocations[9], false, {}, {}};
  constexpr std::size_t n_max = 6;
  struct Case {
    std::string file;
    std::vector<std::size_t> eps;
    bool required;  // one of the two cases the criterion names
  };
  const std::vector<Case> cases = {{"A3.alg", {0}, true}, {"A3.alg", {2}, true}, {"A3_mod_alpha.alg", {0}, false}};
  std::size_t violations = 0, applicable = 0, theorem_checks = 0;
  std::vector<std::string> notes;
  nlohmann::json per_case = nlohmann::json::array();
  for (const auto& c : cases) {
    auto a = fx.load(c.file);
    auto rec = build_recollement(a, c.eps);
    const std::string tag = c.file + " eps={" + a->vertices()[c.eps.front()] + "}";
    const bool certified = rec.i_upper_exact && rec.i_shriek_exact;
    auto xs = enumerate_ces(rec.abar);
    auto ys = enumerate_ces(rec.atilde);
    std::size_t case_violations = 0, identity_failures = 0;
    auto members = [](const CesEnumeration& e, const std::vector<std::size_t>& s) {
      std::vector<RightModule> out;
      for (auto k : s) out.push_back(e.exceptional[k]);
      return out;
    };
    // Identities on the exceptional modules; the theorem on every CES pair.
    auto t_id = check_recollement_theorem(rec, xs.exceptional, ys.exceptional, n_max);
    for (const auto& id : t_id.identities)
      if (!id.holds) ++identity_failures;
    for (const auto& xseq : xs.sequences)
      for (const auto& yseq : ys.sequences) {
        auto t = check_recollement_theorem(rec, members(xs, xseq), members(ys, yseq), n_max);
        ++theorem_checks;
        if (t.implication_violated) ++case_violations;
      }
    if (certified) {
      ++applicable;
      case_violations += identity_failures;
    }
    violations += case_violations;
    per_case.push_back({{"case", tag},
                        {"i_upper_exact", rec.i_upper_exact},
                        {"i_shriek_exact", rec.i_shriek_exact},
                        {"abar_ces", xs.sequences.size()},
                        {"atilde_ces", ys.sequences.size()},
                        {"identity_failures", identity_failures},
                        {"violations", case_violations}});
    std::vector<std::string> inexact;
    if (!rec.i_upper_exact) inexact.push_back("i^*");
    if (!rec.i_shriek_exact) inexact.push_back("i^!");
    notes.push_back(tag + (certified ? ": certificates hold" : ": theorem not applicable, " + join(inexact, ", ") +
                                                                   " not exact") +
                    ", identity mismatches " + std::to_string(identity_failures));
  }
  out.pass = violations == 0;
  out.detail = std::to_string(theorem_checks) + " CES pairs checked, " + std::to_string(applicable) +
               " case(s) with both certificates, " + std::to_string(violations) + " violations; " + join(notes, "; ");
  out.data = {{"cases", per_case}, {"violations", violations}};
  return out;
}

}  // namespace

// ---------------------------------------------------------------- public

std::vector<TableRow> parse_ces_table(std::string_view text) {
  std::vector<TableRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream words(line);
    std::vector<std::string> tok;
    for (std::string w; words >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    if (tok.size() < 4) throw ParseError(lineno, 1, "expected '<label> <marked|-> <specs> => <specs>'");
    TableRow row;
    row.label = tok[0];
    if (tok[1] != "marked" && tok[1] != "-") throw ParseError(lineno, 1, "second field must be 'marked' or '-'");
    row.marked = tok[1] == "marked";
    auto arrow = std::find(tok.begin() + 2, tok.end(), "=>");
    if (arrow == tok.end()) throw ParseError(lineno, 1, "missing '=>'");
    row.sequence.assign(tok.begin() + 2, arrow);
    row.image.assign(arrow + 1, tok.end());
    if (row.sequence.size() != row.image.size())
      throw ParseError(lineno, 1, "sequence and image have different lengths");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RightModule> random_modules(const AlgebraPtr& a, std::size_t count, std::uint32_t seed) {
  std::vector<RightModule> out;
  const std::size_t nv = a->vertex_count();
  if (nv == 0 || count == 0) return out;
  std::mt19937 rng(seed);
  std::vector<RightModule> pool;
  for (std::size_t v = 0; v < nv; ++v) {
    pool.push_back(projective_module(a, v));
    pool.push_back(injective_module(a, v));
  }
  for (std::size_t u = 0; u < nv; ++u)
    for (std::size_t v = 0; v < nv; ++v)
      pool.push_back(direct_sum(a, {projective_module(a, u), injective_module(a, v)}));
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> coin(0, 3);
  for (std::size_t attempts = 0; out.size() < count && attempts < 20 * count; ++attempts) {
    RightModule m = pool[pick(rng)];
    // One or two rounds of taking a random submodule or quotient.
    for (int round = 0, rounds = 1 + coin(rng) % 2; round < rounds && !m.is_zero(); ++round) {
      ShortExact e = random_short_exact(m, static_cast<std::uint32_t>(rng()));
      m = coin(rng) < 2 ? e.quot : e.sub;
    }
    if (!m.is_zero()) out.push_back(m);
  }
  return out;
}

CriterionResult run_criterion(int id, const ReproduceOptions& opts) {
  Fixtures fx{opts.data_dir.empty() ? default_data_dir() : opts.data_dir};
  try {
    switch (id) {
      case 1: return ces_table(fx);
      case 2: return ces_count(fx);
      case 3: return split_theorem_rows(fx);
      case 4: return tensor_goldens(fx);
      case 5: return counterexample(fx);
      case 6: return resolution_golden(fx);
      case 7: return projective_extension(fx);
      case 8: return property_suite(fx, opts);
      case 9: return recollement_theorem(fx);
      default: break;
    }
  } catch (const std::exception& e) {
    return {id, kLocations[id], false, std::string("error: ") + e.what(), {}};
  }
  throw std::out_of_range("no criterion " + std::to_string(id));
}

std::vector<CriterionResult> reproduce_all(const ReproduceOptions& opts) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, opts));
  return out;
}

std::string format_matrix(const std::vector<CriterionResult>& results) {
  std::string s;
  for (const auto& r : results)
    s += std::string(r.pass ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + "  " + r.location + ": " + r.detail + "\n";
  return s;
}

nlohmann::json matrix_json(const std::vector<CriterionResult>& results) {
  auto arr = nlohmann::json::array();
  std::size_t passed = 0;
  for (const auto& r : results) {
    passed += r.pass;
    arr.push_back({{"id", r.id}, {"location", r.location}, {"pass", r.pass}, {"detail", r.detail}, {"data", r.data}});
  }
  return {{"criteria", arr}, {"passed", passed}, {"total", results.size()}};
}

}  // namespace exrep
