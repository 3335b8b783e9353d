// exrep: Hom, Ext, resolutions, split-extension and recollement functors,
// and exceptional sequences for bound quiver algebras.
//
// Exit status: 0 ok, 2 negative verdict or failed hypothesis, 1 error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "exrep/reproduce.hpp"

using namespace exrep;
using nlohmann::json;

namespace {

enum class Status { Ok, HypothesisFailed, Error };

int exit_code(Status s) { return s == Status::Ok ? 0 : s == Status::HypothesisFailed ? 2 : 1; }

std::string status_name(Status s) {
  return s == Status::Ok ? "ok" : s == Status::HypothesisFailed ? "hypothesis-failed" : "error";
}

/// Both renderings are produced from the payload.
struct Report {
  Status status = Status::Ok;
  json payload;
  std::string text;
};

struct Options {
  std::string field;
  std::size_t max_n = 6;
  std::size_t steps = kDefaultMaxSteps;
  std::size_t dim_bound = 1;
  std::vector<std::string> kernel_arrows;
  std::vector<std::string> idempotent;
  bool as_json = false;
  std::string out;
  // positional arguments
  std::string algebra;
  std::vector<std::string> args;
  std::string functor;
  std::string data_dir;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AlgebraPtr load_algebra(const Options& o) {
  AlgebraPtr a = build_algebra(read_file(o.algebra));
  if (!o.field.empty()) {
    FieldSpec f = FieldSpec::parse(o.field);
    if (!(f == a->field())) a = a->over_field(f);
  }
  return a;
}

/// A module spec (simple:/proj:/inj:/thin:) or a module file.
RightModule load_module(const AlgebraPtr& a, const std::string& arg) {
  if (auto m = named_module(a, arg)) return m->with_label(arg);
  return parse_module_file(a, read_file(arg));
}

std::vector<RightModule> load_sequence(const AlgebraPtr& a, const std::string& path) {
  auto base = std::filesystem::path(path).parent_path().string();
  return parse_sequence_file(a, read_file(path), base.empty() ? "." : base);
}

std::vector<std::size_t> idempotent_vertices(const AlgebraPtr& a, const Options& o) {
  if (o.idempotent.empty()) throw std::invalid_argument("--idempotent is required");
  std::vector<std::size_t> out;
  for (const auto& v : o.idempotent) {
    auto idx = a->vertex_index(v);
    if (!idx) throw std::invalid_argument("unknown vertex '" + v + "'");
    out.push_back(*idx);
  }
  return out;
}

SplitExtension split_extension(const AlgebraPtr& r, const Options& o) {
  if (o.kernel_arrows.empty()) throw std::invalid_argument("--kernel-arrows is required");
  return build_split_extension(r, o.kernel_arrows);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string ext_line(const std::vector<std::size_t>& dims) {
  std::string s = "[";
  for (std::size_t k = 0; k < dims.size(); ++k) s += (k ? "," : "") + std::to_string(dims[k]);
  return s + "]";
}

std::string witness_text(const json& w) {
  std::ostringstream os;
  os << "    " << w["condition"].get<std::string>();
  if (w["i"] != 0) os << " at (" << w["i"] << "," << w["j"] << ")";
  if (w["n"] != 0) os << " n=" << w["n"];
  if (w["dim"] != 0) os << " dim=" << w["dim"];
  os << '\n';
  return os.str();
}

std::string exceptional_text(const json& r) {
  std::ostringstream os;
  os << r["subject"].get<std::string>() << ": " << (r["verdict"] ? "exceptional" : "not exceptional") << " ("
     << r["certainty"].get<std::string>() << (r["complete"] ? ", complete" : "") << ")\n";
  for (const auto& w : r["witnesses"]) os << witness_text(w);
  if (!r["images"].empty()) {
    os << "  images:";
    for (const auto& m : r["images"]) os << ' ' << m["name"].get<std::string>();
    os << '\n';
  }
  return os.str();
}

std::string theorem_text(const json& t) {
  std::ostringstream os;
  os << t["theorem"].get<std::string>() << '\n';
  for (const auto& h : t["hypotheses"]) {
    os << "  hypothesis " << h["id"].get<std::string>() << ": " << (h["holds"] ? "holds" : "FAILS") << " ("
       << h["certainty"].get<std::string>() << ")\n";
    for (const auto& w : h["witnesses"]) os << witness_text(w);
  }
  for (const auto& h : t["identities"]) {
    os << "  identity " << h["id"].get<std::string>() << ": " << (h["holds"] ? "holds" : "FAILS") << '\n';
    for (const auto& w : h["witnesses"]) os << witness_text(w);
  }
  for (const auto& c : t["conclusions"]) os << "  conclusion " << exceptional_text(c);
  for (const auto& n : t["notes"]) os << "  note: " << n.get<std::string>() << '\n';
  if (t["implication_violated"]) os << "  IMPLICATION VIOLATED\n";
  return os.str();
}

// ---------------------------------------------------------------- commands

Report cmd_algebra_info(const Options& o) {
  auto a = load_algebra(o);
  json p = {{"name", a->name()}, {"field", a->field().name()}, {"vertices", a->vertices()}, {"dim", a->dim()}};
  json basis = json::array(), gens = json::array(), cartan = json::array();
  for (const auto& b : a->basis()) basis.push_back(b.label);
  for (auto g : a->generators()) gens.push_back(a->element(g).label);
  for (std::size_t u = 0; u < a->vertex_count(); ++u) {
    json row = json::array();
    for (std::size_t v = 0; v < a->vertex_count(); ++v) {
      std::size_t c = 0;
      for (const auto& b : a->basis()) c += b.source == u && b.target == v;
      row.push_back(c);
    }
    cartan.push_back(row);
  }
  p["basis"] = basis;
  p["generators"] = gens;
  p["peirce_dims"] = cartan;
  return {Status::Ok, p, a->describe()};
}

Report cmd_module_check(const Options& o) {
  auto a = load_algebra(o);
  auto m = load_module(a, o.args.at(0));
  auto br = brick_report(m);
  auto ex = is_exceptional(m, o.max_n);
  json p = {{"module", module_json(m)},
            {"is_brick", br.is_brick},
            {"end_dim", br.end_dim},
            {"projective", is_projective_module(m)},
            {"exceptional", ex.to_json()}};
  std::ostringstream os;
  os << "module " << module_name(m) << " dims " << ext_line(m.dims()) << ": valid\n"
     << "  End dim " << br.end_dim << (br.is_brick ? " (brick)" : "") << ", projective "
     << (p["projective"] ? "yes" : "no") << '\n'
     << "  " << exceptional_text(p["exceptional"]);
  return {Status::Ok, p, os.str()};
}

Report cmd_hom(const Options& o) {
  auto a = load_algebra(o);
  auto m = load_module(a, o.args.at(0));
  auto n = load_module(a, o.args.at(1));
  std::size_t d = hom_dim(m, n);
  json p = {{"source", module_name(m)}, {"target", module_name(n)}, {"dim", d}};
  return {Status::Ok, p, "dim Hom(" + module_name(m) + ", " + module_name(n) + ") = " + std::to_string(d) + "\n"};
}

Report cmd_ext(const Options& o) {
  auto a = load_algebra(o);
  auto m = load_module(a, o.args.at(0));
  auto n = load_module(a, o.args.at(1));
  auto e = ext_dims(m, n, o.max_n, o.steps);
  json p = {{"source", module_name(m)},
            {"target", module_name(n)},
            {"dims", e.dims},
            {"certainty", e.certainty_string()},
            {"higher_vanish_certified", e.higher_vanish_certified},
            {"first_nonzero", e.first_nonzero}};
  return {Status::Ok, p,
          "Ext^0.." + std::to_string(o.max_n) + "(" + module_name(m) + ", " + module_name(n) + ") = " +
              ext_line(e.dims) + "  " + e.certainty_string() + "\n"};
}

Report cmd_resolve(const Options& o) {
  auto a = load_algebra(o);
  auto m = load_module(a, o.args.at(0));
  auto res = minimal_resolution(m, o.steps);
  json terms = json::array();
  std::ostringstream os;
  os << "minimal projective resolution of " << module_name(m) << ": " << res.status_string() << '\n';
  for (std::size_t k = 0; k < res.complex.terms.size(); ++k) {
    terms.push_back({{"term", module_name(res.complex.terms[k])}, {"multiplicities", res.cover_multiplicities[k]}});
    os << "  P" << k << " = " << module_name(res.complex.terms[k]) << "  multiplicities "
       << ext_line(res.cover_multiplicities[k]) << '\n';
  }
  json p = {{"module", module_name(m)}, {"status", res.status_string()}, {"terms", terms}};
  return {Status::Ok, p, os.str()};
}

Report cmd_tensor(const Options& o) {
  auto r = load_algebra(o);
  auto se = split_extension(r, o);
  auto m = load_module(se.a, o.args.at(0));
  auto img = se.apply(FunctorKind::TensorUpR, m);
  json p = {{"source", module_name(m)}, {"image", module_json(img)}};
  return {Status::Ok, p, module_name(m) + " (x)_A R = " + module_name(img) + "\n" + format_module(img)};
}

Report cmd_split_verify(const Options& o) {
  auto r = load_algebra(o);
  auto se = split_extension(r, o);
  auto res = minimal_resolution(se.left_r(), o.steps, 1);
  // Functor identities on the standard samples.
  std::size_t checks = 0;
  std::vector<std::string> failures;
  for (const auto& m : module_samples(se.a)) {
    ++checks;
    if (!iso_test(se.apply(FunctorKind::TensorDownA, se.apply(FunctorKind::TensorUpR, m)), m))
      failures.push_back("(M (x) R) (x) A != M for " + module_name(m));
    ++checks;
    if (!iso_test(se.apply(FunctorKind::HomDown, se.apply(FunctorKind::HomUp, m)), m))
      failures.push_back("Hom_R(A, Hom_A(R, M)) != M for " + module_name(m));
  }
  json p = {{"r_dim", r->dim()},
            {"a_dim", se.a->dim()},
            {"q_dim", se.q.dim()},
            {"left_projective", se.is_projective_left},
            {"left_cover_multiplicities", res.cover_multiplicities.front()},
            {"identity_checks", checks},
            {"identity_failures", failures}};
  std::ostringstream os;
  os << "split extension " << r->name() << " -> " << se.a->name() << ": dim R = " << r->dim()
     << ", dim A = " << se.a->dim() << ", dim Q = " << se.q.dim() << '\n'
     << "  _A R projective: " << (se.is_projective_left ? "yes" : "no") << ", top multiplicities "
     << ext_line(res.cover_multiplicities.front()) << '\n'
     << "  functor identities: " << checks - failures.size() << "/" << checks << " hold\n";
  for (const auto& f : failures) os << "    " << f << '\n';
  return {failures.empty() ? Status::Ok : Status::Error, p, os.str()};
}

Report cmd_check_seq(const Options& o) {
  auto a = load_algebra(o);
  auto seq = load_sequence(a, o.args.at(0));
  auto rep = is_exceptional_sequence(seq, o.max_n);
  auto p = rep.to_json();
  return {rep.verdict ? Status::Ok : Status::HypothesisFailed, p, exceptional_text(p)};
}

Status theorem_status(const TheoremReport& t) {
  if (t.implication_violated) return Status::Error;
  if (!t.hypotheses_certified) return Status::HypothesisFailed;
  for (const auto& c : t.conclusions)
    if (!c.verdict) return Status::HypothesisFailed;
  return Status::Ok;
}

Report cmd_check_thm_split(const Options& o) {
  auto r = load_algebra(o);
  auto se = split_extension(r, o);
  auto seq = load_sequence(se.a, o.args.at(0));
  auto t = check_split_theorem(se, seq, o.max_n);
  auto p = t.to_json();
  return {theorem_status(t), p, theorem_text(p)};
}

FunctorKind recollement_functor(const std::string& name) {
  const std::vector<std::pair<std::string, FunctorKind>> table = {
      {"i_*", FunctorKind::IStar},  {"i^*", FunctorKind::IUpperStar}, {"i^!", FunctorKind::IShriek},
      {"j_!", FunctorKind::JLower}, {"j^*", FunctorKind::JUpperStar}, {"j_*", FunctorKind::JStar}};
  for (const auto& [n, k] : table)
    if (n == name) return k;
  throw std::invalid_argument("unknown functor '" + name + "' (use i_*, i^*, i^!, j_!, j^*, j_*)");
}

Report cmd_recollement_map(const Options& o) {
  auto a = load_algebra(o);
  auto rec = build_recollement(a, idempotent_vertices(a, o));
  FunctorKind k = recollement_functor(o.functor);
  AlgebraPtr source = a;
  if (k == FunctorKind::IStar) source = rec.abar;
  if (k == FunctorKind::JLower || k == FunctorKind::JStar) source = rec.atilde;
  auto m = load_module(source, o.args.at(0));
  auto img = rec.apply(k, m);
  json p = {{"functor", o.functor}, {"source", module_name(m)}, {"image", module_json(img)}};
  return {Status::Ok, p, o.functor + "(" + module_name(m) + ") = " + module_name(img) + "\n" + format_module(img)};
}

Report cmd_recollement_laws(const Options& o) {
  auto a = load_algebra(o);
  auto rec = build_recollement(a, idempotent_vertices(a, o));
  auto rep = verify_recollement_laws(rec, default_samples(rec));
  json failures = json::array();
  for (const auto& f : rep.failures) failures.push_back({{"law", f.law}, {"detail", f.detail}});
  json p = {{"checks", rep.checks},
            {"failures", failures},
            {"i_upper_exact", rec.i_upper_exact},
            {"i_shriek_exact", rec.i_shriek_exact},
            {"jstar_note", rep.jstar_note}};
  std::ostringstream os;
  os << "recollement " << rec.abar->name() << " <- " << a->name() << " <- " << rec.atilde->name() << '\n'
     << "  " << rep.checks << " checks, " << rep.failures.size() << " failures\n";
  for (const auto& f : rep.failures) os << "    " << f.law << ": " << f.detail << '\n';
  os << "  i^* exact: " << (rec.i_upper_exact ? "yes" : "no") << ", i^! exact: " << (rec.i_shriek_exact ? "yes" : "no")
     << '\n'
     << "  note: " << rep.jstar_note << '\n';
  return {rep.ok() ? Status::Ok : Status::HypothesisFailed, p, os.str()};
}

Report cmd_recollement_thm(const Options& o) {
  auto a = load_algebra(o);
  auto rec = build_recollement(a, idempotent_vertices(a, o));
  std::vector<std::pair<std::vector<RightModule>, std::vector<RightModule>>> cases;
  if (o.args.size() == 2) {
    cases.emplace_back(load_sequence(rec.abar, o.args[0]), load_sequence(rec.atilde, o.args[1]));
  } else {
    EnumerationConfig cfg;
    cfg.dim_bound = o.dim_bound;
    auto xs = enumerate_ces(rec.abar, cfg, o.max_n);
    auto ys = enumerate_ces(rec.atilde, cfg, o.max_n);
    for (const auto& xseq : xs.sequences)
      for (const auto& yseq : ys.sequences) {
        std::vector<RightModule> x, y;
        for (auto k : xseq) x.push_back(xs.exceptional[k]);
        for (auto k : yseq) y.push_back(ys.exceptional[k]);
        cases.emplace_back(std::move(x), std::move(y));
      }
  }
  json reports = json::array();
  std::string text;
  Status status = Status::Ok;
  for (const auto& [x, y] : cases) {
    auto t = check_recollement_theorem(rec, x, y, o.max_n);
    auto p = t.to_json();
    reports.push_back(p);
    text += theorem_text(p);
    Status s = theorem_status(t);
    if (s == Status::Error || (s == Status::HypothesisFailed && status == Status::Ok)) status = s;
  }
  return {status, json{{"cases", reports}}, text};
}

Report cmd_enumerate(const Options& o, bool ces) {
  AlgebraPtr a = build_algebra(read_file(o.algebra));
  EnumerationConfig cfg;
  if (!o.field.empty()) cfg.field = FieldSpec::parse(o.field);
  cfg.dim_bound = o.dim_bound;
  std::ostringstream os;
  if (!ces) {
    auto b = enumerate_bricks(a, cfg);
    json bricks = json::array();
    for (const auto& m : b.bricks) bricks.push_back(module_json(m));
    os << b.bricks.size() << " bricks over " << cfg.field.name() << " with dim_v <= " << cfg.dim_bound
       << (b.complete ? "" : " (budget exhausted)") << '\n';
    for (const auto& m : b.bricks) os << "  " << module_name(m) << "  dims " << ext_line(m.dims()) << '\n';
    json p = {{"bricks", bricks}, {"complete", b.complete}, {"candidates", b.candidates}};
    return {b.complete ? Status::Ok : Status::Error, p, os.str()};
  }
  auto c = enumerate_ces(a, cfg, o.max_n);
  json mods = json::array(), seqs = json::array();
  for (const auto& m : c.exceptional) mods.push_back(module_json(m));
  for (const auto& s : c.sequences) {
    json names = json::array();
    for (auto k : s) names.push_back(module_name(c.exceptional[k]));
    seqs.push_back(names);
  }
  os << c.sequences.size() << " complete exceptional sequences from " << c.exceptional.size()
     << " exceptional modules" << (c.complete ? "" : " (budget exhausted)") << '\n';
  for (const auto& s : seqs) {
    os << "  (";
    for (std::size_t k = 0; k < s.size(); ++k) os << (k ? ", " : "") << s[k].get<std::string>();
    os << ")\n";
  }
  if (c.uncertified_pairs) os << "  " << c.uncertified_pairs << " pairs rejected as uncertified\n";
  json p = {{"exceptional", mods},
            {"sequences", seqs},
            {"complete", c.complete},
            {"uncertified_pairs", c.uncertified_pairs},
            {"dropped_on_lift", c.dropped_on_lift}};
  return {c.complete ? Status::Ok : Status::Error, p, os.str()};
}

Report cmd_reproduce(const Options& o) {
  ReproduceOptions ro;
  ro.data_dir = o.data_dir.empty() ? default_data_dir() : o.data_dir;
  auto results = reproduce_all(ro);
  auto p = matrix_json(results);
  std::string text = format_matrix(results);
  bool all = true;
  for (const auto& r : results) all = all && r.pass;
  return {all ? Status::Ok : Status::Error, p, text};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exrep: homological computations and exceptional sequences for bound quiver algebras"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--field", o.field, "ground field, Q or F<p>");
  app.add_option("--max-n", o.max_n, "largest Ext degree reported")->check(CLI::NonNegativeNumber);
  app.add_option("--steps", o.steps, "maximal number of projective covers")->check(CLI::PositiveNumber);
  app.add_option("--dim-bound", o.dim_bound, "enumeration bound on each dim_v")->check(CLI::PositiveNumber);
  std::string kernel_arrows, idempotent;
  app.add_option("--kernel-arrows", kernel_arrows, "arrows generating the kernel, a,b");
  app.add_option("--idempotent", idempotent, "vertices of the idempotent eps, v1,v2");
  app.add_flag("--json", o.as_json, "emit JSON");
  app.add_option("--out", o.out, "write the report to a file");
  app.fallthrough();

  std::function<Report()> run;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, std::size_t nargs,
                  std::function<Report()> fn) {
    auto* sub = parent->add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("algebra", o.algebra, "algebra file")->required()->check(CLI::ExistingFile);
    if (nargs > 0) sub->add_option("args", o.args, "module specs, module files or sequence files")->expected(nargs);
    sub->callback([&run, fn] { run = fn; });
    return sub;
  };

  auto* algebra = app.add_subcommand("algebra", "algebra commands")->require_subcommand(1);
  leaf(algebra, "info", "basis, generators and Peirce dimensions", 0, [&] { return cmd_algebra_info(o); });
  auto* module = app.add_subcommand("module", "module commands")->require_subcommand(1);
  leaf(module, "check", "validate a module; brick and exceptional tests", 1, [&] { return cmd_module_check(o); });
  leaf(&app, "hom", "dim Hom(M, N)", 2, [&] { return cmd_hom(o); });
  leaf(&app, "ext", "dim Ext^n(M, N), 0 <= n <= max-n", 2, [&] { return cmd_ext(o); });
  leaf(&app, "resolve", "minimal projective resolution", 1, [&] { return cmd_resolve(o); });
  leaf(&app, "tensor", "M (x)_A R for the split extension given by --kernel-arrows", 1, [&] { return cmd_tensor(o); });
  auto* split = app.add_subcommand("split-ext", "split extensions")->require_subcommand(1);
  leaf(split, "verify", "build the extension and check functor identities", 0, [&] { return cmd_split_verify(o); });
  auto* check = app.add_subcommand("check", "exceptional sequences and theorem hypotheses")->require_subcommand(1);
  leaf(check, "seq", "is the sequence file exceptional?", 1, [&] { return cmd_check_seq(o); });
  leaf(check, "thm-split", "split-extension theorem on a sequence over A", 1, [&] { return cmd_check_thm_split(o); });
  auto* rec = app.add_subcommand("recollement", "idempotent recollements")->require_subcommand(1);
  auto* map = leaf(rec, "map", "apply one of the six functors", 1, [&] { return cmd_recollement_map(o); });
  map->add_option("--functor", o.functor, "i_*, i^*, i^!, j_!, j^* or j_*")->required();
  leaf(rec, "laws", "check the recollement laws", 0, [&] { return cmd_recollement_laws(o); });
  auto* thm = leaf(rec, "thm", "images of exceptional sequences under i_* and j_!", 0,
                   [&] { return cmd_recollement_thm(o); });
  thm->add_option("sequences", o.args, "sequence files over Abar and Atilde (default: all CES)")->expected(0, 2);
  auto* enumerate = app.add_subcommand("enumerate", "enumeration")->require_subcommand(1);
  leaf(enumerate, "bricks", "bricks with dim_v <= dim-bound over a prime field", 0, [&] { return cmd_enumerate(o, false); });
  leaf(enumerate, "ces", "complete exceptional sequences", 0, [&] { return cmd_enumerate(o, true); });
  auto* repro = app.add_subcommand("reproduce-paper", "run the bundled reproduction criteria");
  repro->fallthrough();
  repro->add_option("--data", o.data_dir, "fixture directory")->check(CLI::ExistingDirectory);
  repro->callback([&] { run = [&] { return cmd_reproduce(o); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  o.kernel_arrows = split_list(kernel_arrows);
  o.idempotent = split_list(idempotent);

  Report rep;
  bool raised = false;
  try {
    rep = run();
  } catch (const std::exception& e) {
    raised = true;
    rep = {Status::Error, json{{"error", e.what()}}, std::string("error: ") + e.what() + "\n"};
  }
  json doc = {{"status", status_name(rep.status)}, {"payload", rep.payload}};
  std::string body = o.as_json ? doc.dump(2) + "\n" : rep.text;
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) {
      std::cerr << "error: cannot write " << o.out << '\n';
      return 1;
    }
    f << body;
  } else if (raised && !o.as_json) {
    std::cerr << body;
  } else {
    std::cout << body;
  }
  return exit_code(rep.status);
}
