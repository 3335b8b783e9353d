#include "exrep/exceptional.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

namespace exrep {

std::string certainty_name(Certainty c) { return c == Certainty::Certified ? "Certified" : "UpToBound"; }

std::string module_name(const RightModule& m) {
  if (m.is_zero()) return "0";
  return "(" + layer_label(m) + ")";
}

nlohmann::json module_json(const RightModule& m) {
  return {{"name", module_name(m)}, {"dims", m.dims()}, {"text", format_module(m)}};
}

namespace {

nlohmann::json witness_json(const Witness& w) {
  return {{"condition", w.uncertified ? w.condition + "(uncertified)" : w.condition},
          {"i", w.i},
          {"j", w.j},
          {"n", w.n},
          {"dim", w.dim}};
}

nlohmann::json witnesses_json(const std::vector<Witness>& ws) {
  auto out = nlohmann::json::array();
  for (const auto& w : ws) out.push_back(witness_json(w));
  return out;
}

std::string sequence_subject(const std::vector<RightModule>& seq) {
  std::string s = "(";
  for (std::size_t k = 0; k < seq.size(); ++k) s += (k ? ", " : "") + module_name(seq[k]);
  return s + ")";
}

void finish(ExceptionalReport& rep) {
  rep.verdict = std::none_of(rep.witnesses.begin(), rep.witnesses.end(), [](const Witness& w) { return !w.uncertified; });
  rep.certainty = std::any_of(rep.witnesses.begin(), rep.witnesses.end(), [](const Witness& w) { return w.uncertified; })
                      ? Certainty::UpToBound
                      : Certainty::Certified;
}

void require_same_algebra(const std::vector<RightModule>& seq) {
  for (const auto& m : seq)
    if (!m.algebra()->same_as(*seq.front().algebra()))
      throw ModuleError("sequence members live over different algebras");
}

}  // namespace

nlohmann::json ExceptionalReport::to_json() const {
  nlohmann::json imgs = nlohmann::json::array();
  for (const auto& m : images) imgs.push_back(module_json(m));
  return {{"subject", subject},
          {"verdict", verdict},
          {"certainty", certainty_name(certainty)},
          {"complete", complete},
          {"witnesses", witnesses_json(witnesses)},
          {"images", imgs}};
}

nlohmann::json TheoremReport::to_json() const {
  auto hyp = [](const std::vector<HypothesisResult>& hs) {
    auto out = nlohmann::json::array();
    for (const auto& h : hs)
      out.push_back({{"id", h.id},
                     {"holds", h.holds},
                     {"certainty", certainty_name(h.certainty)},
                     {"witnesses", witnesses_json(h.witnesses)}});
    return out;
  };
  auto concl = nlohmann::json::array();
  for (const auto& c : conclusions) concl.push_back(c.to_json());
  return {{"theorem", theorem},
          {"hypotheses", hyp(hypotheses)},
          {"hypotheses_certified", hypotheses_certified},
          {"identities", hyp(identities)},
          {"conclusions", concl},
          {"implication_violated", implication_violated},
          {"notes", notes}};
}

// ---------------------------------------------------------------- Ext oracle

ExtResult ExtOracle::ext(const RightModule& m, const RightModule& n) {
  const std::string key = m.fingerprint();
  const Resolution* res = nullptr;
  for (const auto& [k, r] : cache_)
    if (k == key) res = &r;
  if (!res) {
    cache_.emplace_back(key, minimal_resolution(m, kDefaultMaxSteps, n_max_ + 2));
    res = &cache_.back().second;
  }
  // Compute far enough that the first nonzero degree, if any, is visible.
  std::size_t bound = n_max_;
  if (res->status == ResolutionStatus::Periodic) bound = std::max(bound, res->lead + res->period);
  if (res->status == ResolutionStatus::FinitePd) bound = std::max(bound, res->pd);
  return ext_dims(*res, n, bound);
}

bool record_ext_vanishing(ExceptionalReport& rep, const ExtResult& e, const std::string& condition, std::size_t i,
                          std::size_t j) {
  if (e.first_nonzero != 0) {
    rep.witnesses.push_back({condition, i, j, e.first_nonzero, e.dims[e.first_nonzero], false});
    return false;
  }
  if (!e.higher_vanish_certified) {
    rep.witnesses.push_back({condition, i, j, e.dims.size() - 1, 0, true});
    return false;
  }
  return true;
}

// ---------------------------------------------------------------- predicates

namespace {

ExceptionalReport sequence_report(const std::vector<RightModule>& seq, ExtOracle& oracle) {
  ExceptionalReport rep;
  rep.subject = sequence_subject(seq);
  rep.n_max = oracle.n_max();
  if (!seq.empty()) {
    require_same_algebra(seq);
    rep.complete = seq.size() == seq.front().algebra()->vertex_count();
  }
  for (std::size_t k = 0; k < seq.size(); ++k) {
    auto br = brick_report(seq[k]);
    if (!br.is_brick) rep.witnesses.push_back({"E1", k + 1, k + 1, 0, br.end_dim, false});
    record_ext_vanishing(rep, oracle.ext(seq[k], seq[k]), "E2", k + 1, k + 1);
  }
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      if (auto h = hom_dim(seq[j], seq[i]); h != 0) rep.witnesses.push_back({"E1'", i + 1, j + 1, 0, h, false});
      record_ext_vanishing(rep, oracle.ext(seq[j], seq[i]), "E2'", i + 1, j + 1);
    }
  finish(rep);
  return rep;
}

}  // namespace

ExceptionalReport is_exceptional(const RightModule& m, std::size_t n_max) {
  ExtOracle oracle(n_max);
  ExceptionalReport rep = sequence_report({m}, oracle);
  rep.subject = module_name(m);
  return rep;
}

ExceptionalReport is_exceptional_sequence(const std::vector<RightModule>& seq, std::size_t n_max) {
  ExtOracle oracle(n_max);
  return sequence_report(seq, oracle);
}

ExceptionalReport semibrick_report(const std::vector<RightModule>& modules) {
  ExceptionalReport rep;
  rep.subject = "{" + sequence_subject(modules).substr(1);
  rep.subject.back() = '}';
  if (!modules.empty()) require_same_algebra(modules);
  for (std::size_t i = 0; i < modules.size(); ++i) {
    auto br = brick_report(modules[i]);
    if (!br.is_brick) rep.witnesses.push_back({"brick", i + 1, i + 1, 0, br.end_dim, false});
    for (std::size_t j = 0; j < modules.size(); ++j)
      if (i != j)
        if (auto h = hom_dim(modules[i], modules[j]); h != 0)
          rep.witnesses.push_back({"semibrick", i + 1, j + 1, 0, h, false});
  }
  finish(rep);
  return rep;
}

// ---------------------------------------------------------------- theorem checkers

namespace {

HypothesisResult from_report(std::string id, const ExceptionalReport& rep) {
  return {std::move(id), rep.verdict, rep.certainty, rep.witnesses};
}

void settle(TheoremReport& t) {
  t.hypotheses_certified = std::all_of(t.hypotheses.begin(), t.hypotheses.end(), [](const HypothesisResult& h) {
    return h.holds && h.certainty == Certainty::Certified;
  });
  const bool all_true =
      std::all_of(t.conclusions.begin(), t.conclusions.end(), [](const ExceptionalReport& r) { return r.verdict; });
  t.implication_violated = t.hypotheses_certified && !all_true;
  if (!t.hypotheses_certified) t.notes.push_back("hypotheses not met; conclusion evaluated but not asserted");
}

}  // namespace

TheoremReport check_split_theorem(const SplitExtension& se, const std::vector<RightModule>& seq, std::size_t n_max) {
  TheoremReport t;
  t.theorem = "split extension: (M_i) exceptional over A => (M_i (x)_A R) exceptional over R";
  for (const auto& m : seq)
    if (!m.algebra()->same_as(*se.a)) throw ModuleError("sequence is not over the quotient algebra A");
  ExtOracle oracle(n_max);

  t.hypotheses.push_back(from_report("(1)", sequence_report(seq, oracle)));

  HypothesisResult h2{"(2)", se.is_projective_left, Certainty::Certified, {}};
  if (!h2.holds) h2.witnesses.push_back({"_A R not projective", 0, 0, 0, 0, false});
  t.hypotheses.push_back(h2);

  std::vector<RightModule> mq;
  for (const auto& m : seq) mq.push_back(tensor_with_bimodule(m, se.q_aa));
  // Pairs (k, k) and (i, j) with i < j: conditions on (M_j, M_i (x) Q).
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i; j < seq.size(); ++j) pairs.emplace_back(i, j);

  ExceptionalReport h3, h4;
  for (const auto& [i, j] : pairs) {
    if (auto h = hom_dim(seq[j], mq[i]); h != 0) h3.witnesses.push_back({"(3)", i + 1, j + 1, 0, h, false});
    record_ext_vanishing(h4, oracle.ext(seq[j], mq[i]), "(4)", i + 1, j + 1);
  }
  finish(h3);
  finish(h4);
  t.hypotheses.push_back(from_report("(3)", h3));
  t.hypotheses.push_back(from_report("(4)", h4));

  std::vector<RightModule> images;
  for (const auto& m : seq) images.push_back(se.apply(FunctorKind::TensorUpR, m));
  ExtOracle image_oracle(n_max);
  ExceptionalReport concl = sequence_report(images, image_oracle);
  concl.images = images;
  t.conclusions.push_back(std::move(concl));
  settle(t);
  return t;
}

TheoremReport check_recollement_theorem(const Recollement& rec, const std::vector<RightModule>& over_abar,
                                        const std::vector<RightModule>& over_atilde, std::size_t n_max) {
  TheoremReport t;
  t.theorem = "recollement: i^*, i^! exact => i_*, j_! preserve exceptional sequences";
  HypothesisResult hi{"i^* exact", rec.i_upper_exact, Certainty::Certified, {}};
  HypothesisResult hs{"i^! exact", rec.i_shriek_exact, Certainty::Certified, {}};
  if (!hi.holds) hi.witnesses.push_back({"_A Abar projective", 0, 0, 0, 0, false});
  if (!hs.holds) hs.witnesses.push_back({"Abar_A projective", 0, 0, 0, 0, false});
  t.hypotheses.push_back(hi);
  t.hypotheses.push_back(hs);

  ExtOracle bar_oracle(n_max), tilde_oracle(n_max), a_oracle(n_max);
  t.hypotheses.push_back(from_report("X exceptional", sequence_report(over_abar, bar_oracle)));
  t.hypotheses.push_back(from_report("Y exceptional", sequence_report(over_atilde, tilde_oracle)));

  std::vector<RightModule> ix, jy;
  for (const auto& x : over_abar) ix.push_back(rec.apply(FunctorKind::IStar, x));
  for (const auto& y : over_atilde) jy.push_back(rec.apply(FunctorKind::JLower, y));

  auto identity = [&](std::string id, const std::vector<RightModule>& src, const std::vector<RightModule>& img,
                      ExtOracle& src_oracle) {
    HypothesisResult h{std::move(id), true, Certainty::Certified, {}};
    for (std::size_t k = 0; k < src.size(); ++k) {
      auto lhs = a_oracle.ext(img[k], img[k]);
      auto rhs = src_oracle.ext(src[k], src[k]);
      for (std::size_t n = 1; n <= n_max; ++n)
        if (lhs.dims[n] != rhs.dims[n]) {
          h.holds = false;
          h.witnesses.push_back({h.id, k + 1, k + 1, n, lhs.dims[n], false});
        }
    }
    t.identities.push_back(std::move(h));
  };
  identity("Ext^n(i_* X, i_* X) = Ext^n(X, X)", over_abar, ix, bar_oracle);
  identity("Ext^n(j_! Y, j_! Y) = Ext^n(Y, Y)", over_atilde, jy, tilde_oracle);

  ExceptionalReport c1 = sequence_report(ix, a_oracle);
  c1.images = ix;
  ExceptionalReport c2 = sequence_report(jy, a_oracle);
  c2.images = jy;
  t.conclusions.push_back(std::move(c1));
  t.conclusions.push_back(std::move(c2));
  settle(t);
  if (t.hypotheses_certified)
    for (const auto& h : t.identities)
      if (!h.holds) t.implication_violated = true;
  return t;
}

// ---------------------------------------------------------------- enumeration

BrickEnumeration enumerate_bricks(const AlgebraPtr& a, const EnumerationConfig& cfg) {
  if (cfg.field.is_rational()) throw ModuleError("brick enumeration needs a prime field");
  if (cfg.budget == 0) throw ModuleError("enumeration budget must be positive");
  AlgebraPtr af = a->field() == cfg.field ? a : a->over_field(cfg.field);
  BrickEnumeration out;
  const std::size_t nv = af->vertex_count();
  if (nv == 0) return out;
  const long p = static_cast<long>(cfg.field.prime);
  const auto& gens = af->generators();

  std::vector<std::size_t> dims(nv, 0);
  auto next_dims = [&]() {
    for (std::size_t v = nv; v-- > 0;) {
      if (dims[v] < cfg.dim_bound) {
        ++dims[v];
        return true;
      }
      dims[v] = 0;
    }
    return false;
  };
  while (next_dims()) {
    std::size_t entries = 0;
    for (auto g : gens) entries += dims[af->element(g).source] * dims[af->element(g).target];
    std::vector<long> digits(entries, 0);
    std::vector<RightModule> same_dims;
    while (true) {
      if (++out.candidates > cfg.budget) {
        out.complete = false;
        return out;
      }
      std::vector<std::pair<std::size_t, Matrix>> acts;
      std::size_t k = 0;
      for (auto g : gens) {
        const auto& e = af->element(g);
        Matrix m(cfg.field, dims[e.source], dims[e.target]);
        for (std::size_t r = 0; r < m.rows(); ++r)
          for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = Scalar(cfg.field, digits[k++]);
        acts.emplace_back(g, std::move(m));
      }
      try {
        RightModule cand = RightModule::from_generators(af, dims, acts);
        if (brick_report(cand).is_brick &&
            std::none_of(same_dims.begin(), same_dims.end(),
                         [&](const RightModule& b) { return static_cast<bool>(iso_test(b, cand)); })) {
          cand = cand.with_label(module_name(cand));
          same_dims.push_back(cand);
          out.bricks.push_back(cand);
        }
      } catch (const ModuleError&) {
        // violates the relations
      }
      // Odometer with the last entry least significant: lexicographic order.
      std::size_t i = entries;
      while (i > 0 && ++digits[i - 1] == p) digits[--i] = 0;
      if (i == 0) break;
    }
  }
  return out;
}

CesEnumeration enumerate_ces(const AlgebraPtr& a, const EnumerationConfig& cfg, std::size_t n_max) {
  CesEnumeration out;
  BrickEnumeration be = enumerate_bricks(a, cfg);
  out.complete = be.complete;
  ExtOracle oracle(n_max);
  for (const auto& b : be.bricks) {
    RightModule m = b;
    if (a->field() != cfg.field) {
      try {
        m = lift_to(a, b).with_label(b.label());
      } catch (const ModuleError&) {
        ++out.dropped_on_lift;
        continue;
      }
      if (!brick_report(m).is_brick) {
        ++out.dropped_on_lift;
        continue;
      }
      if (std::any_of(out.exceptional.begin(), out.exceptional.end(),
                      [&](const RightModule& x) { return static_cast<bool>(iso_test(x, m)); }))
        continue;
    }
    ExceptionalReport probe;
    if (record_ext_vanishing(probe, oracle.ext(m, m), "E2", 1, 1)) out.exceptional.push_back(m);
  }
  const std::size_t n = out.exceptional.size();
  // follows[x][y]: y may appear after x, i.e. Hom(y, x) = 0 = Ext^{>=1}(y, x).
  std::vector<std::vector<bool>> follows(n, std::vector<bool>(n, false));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y || hom_dim(out.exceptional[y], out.exceptional[x]) != 0) continue;
      ExtResult e = oracle.ext(out.exceptional[y], out.exceptional[x]);
      if (e.first_nonzero == 0 && !e.higher_vanish_certified) ++out.uncertified_pairs;
      follows[x][y] = e.first_nonzero == 0 && e.higher_vanish_certified;
    }
  const std::size_t r = a->vertex_count();
  if (r == 0) return out;
  std::vector<std::size_t> seq;
  std::function<void()> extend = [&]() {
    if (seq.size() == r) {
      out.sequences.push_back(seq);
      return;
    }
    for (std::size_t y = 0; y < n; ++y) {
      if (!std::all_of(seq.begin(), seq.end(), [&](std::size_t x) { return follows[x][y]; })) continue;
      seq.push_back(y);
      extend();
      seq.pop_back();
    }
  };
  extend();
  return out;
}

// ---------------------------------------------------------------- sequence files

std::vector<RightModule> parse_sequence_file(const AlgebraPtr& a, std::string_view text, const std::string& base_dir) {
  std::vector<RightModule> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string spec = line.substr(b, e - b + 1);
    try {
      if (auto m = named_module(a, spec)) {
        out.push_back(m->with_label(spec));
        continue;
      }
    } catch (const std::exception& ex) {
      throw ParseError(lineno, b + 1, ex.what());
    }
    std::filesystem::path path = std::filesystem::path(base_dir) / spec;
    std::ifstream f(path);
    if (!f) throw ParseError(lineno, b + 1, "'" + spec + "' is neither a module spec nor a readable file");
    std::ostringstream ss;
    ss << f.rdbuf();
    out.push_back(parse_module_file(a, ss.str()));
  }
  return out;
}

}  // namespace exrep
