#include "exrep/algebra.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace exrep {

// ---------------------------------------------------------------- Algebra

Algebra::Algebra(std::string name, FieldSpec field, std::vector<std::string> vertices,
                 std::vector<BasisElement> basis, std::vector<SparseVector> table)
    : name_(std::move(name)),
      field_(field),
      vertices_(std::move(vertices)),
      basis_(std::move(basis)),
      table_(std::move(table)),
      idempotents_(vertices_.size()) {
  const std::size_t n = basis_.size();
  if (table_.size() != n * n) throw AlgebraError("multiplication table has wrong size");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = basis_[i];
    if (b.source >= vertices_.size() || b.target >= vertices_.size())
      throw AlgebraError("basis element '" + b.label + "' has an unknown endpoint");
    if (b.degree == 0) {
      if (b.source != b.target) throw AlgebraError("degree-0 element '" + b.label + "' is not at a vertex");
      if (idempotents_[b.source]) throw AlgebraError("two idempotents at vertex " + vertices_[b.source]);
      idempotents_[b.source] = i;
    } else {
      radical_.push_back(i);
    }
  }
  for (auto& entry : table_) {
    std::sort(entry.begin(), entry.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::erase_if(entry, [](const auto& x) { return x.second.is_zero(); });
  }

  std::ostringstream fp;
  fp << field_.name() << '|';
  for (const auto& v : vertices_) fp << v << ',';
  fp << '|';
  for (const auto& b : basis_) fp << b.source << ':' << b.target << ':' << b.degree << ';';
  fp << '|';
  for (std::size_t k = 0; k < table_.size(); ++k) {
    if (table_[k].empty()) continue;
    fp << k << '=';
    for (const auto& [idx, c] : table_[k]) fp << idx << '*' << c.to_string() << ' ';
    fp << ';';
  }
  fingerprint_ = fp.str();

  compute_generators();
}

std::vector<Scalar> Algebra::unit_vector(std::size_t i) const {
  std::vector<Scalar> v(dim(), Scalar::zero(field_));
  v[i] = Scalar::one(field_);
  return v;
}

std::vector<Scalar> Algebra::multiply(std::span<const Scalar> x, std::span<const Scalar> y) const {
  std::vector<Scalar> out(dim(), Scalar::zero(field_));
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim(); ++j) {
      if (y[j].is_zero()) continue;
      Scalar c = x[i] * y[j];
      for (const auto& [k, v] : product(i, j)) out[k] += c * v;
    }
  }
  return out;
}

std::optional<std::size_t> Algebra::find_label(std::string_view label) const {
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (basis_[i].label == label) return i;
  return std::nullopt;
}

std::optional<std::size_t> Algebra::vertex_index(std::string_view label) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i] == label) return i;
  return std::nullopt;
}

void Algebra::compute_generators() {
  const std::size_t n = dim();
  words_.assign(n, std::nullopt);
  if (radical_.empty()) return;
  // rad^2 inside the coordinates of rad.
  const std::size_t r = radical_.size();
  std::vector<std::size_t> pos(n, n);
  for (std::size_t i = 0; i < r; ++i) pos[radical_[i]] = i;
  Matrix sq(field_, 0, r);
  bool in_radical = true;
  for (auto i : radical_)
    for (auto j : radical_) {
      if (product(i, j).empty()) continue;
      std::vector<Scalar> row(r, Scalar::zero(field_));
      for (const auto& [k, c] : product(i, j)) {
        if (pos[k] == n) {
          in_radical = false;
          continue;
        }
        row[pos[k]] = c;
      }
      sq.append_row(row);
    }
  Subspace rad2 = Subspace::span(sq);
  if (!in_radical) {
    // Malformed table: treat every radical element as a generator.
    generators_ = radical_;
  } else {
    Quotient q = quotient_prefer_low(r, rad2);
    for (auto k : q.kept) generators_.push_back(radical_[k]);
  }

  // Greedy basis of words: every word is a combination of earlier words
  // times a generator, so extending kept words suffices.
  struct Word {
    std::vector<std::size_t> letters;
    std::vector<Scalar> value;
  };
  std::vector<Word> kept;
  Matrix values(field_, 0, n);
  std::vector<std::size_t> frontier;
  auto try_add = [&](Word w) {
    bool zero = std::all_of(w.value.begin(), w.value.end(), [](const Scalar& s) { return s.is_zero(); });
    if (zero) return;
    Matrix trial = values;
    trial.append_row(w.value);
    if (rank(trial) == kept.size()) return;
    values = std::move(trial);
    kept.push_back(std::move(w));
    frontier.push_back(kept.size() - 1);
  };
  for (auto g : generators_) try_add({{g}, unit_vector(g)});
  for (std::size_t round = 0; round < n && !frontier.empty(); ++round) {
    auto current = std::move(frontier);
    frontier.clear();
    for (auto w : current)
      for (auto g : generators_) {
        Word next{kept[w].letters, multiply(kept[w].value, unit_vector(g))};
        next.letters.push_back(g);
        try_add(std::move(next));
      }
  }
  for (auto b : radical_) {
    Matrix target(field_, 1, n);
    target(0, b) = Scalar::one(field_);
    auto sol = solve_right(values, target);
    if (!sol.particular) continue;
    std::vector<GeneratorWord> expr;
    for (std::size_t k = 0; k < kept.size(); ++k) {
      const Scalar& c = (*sol.particular)(0, k);
      if (!c.is_zero()) expr.push_back({c, kept[k].letters});
    }
    words_[b] = std::move(expr);
  }
}

std::shared_ptr<const Algebra> Algebra::over_field(FieldSpec field) const {
  if (field == field_) return std::make_shared<Algebra>(*this);
  if (!field_.is_rational()) throw AlgebraError("can only change field starting from Q");
  std::vector<SparseVector> table;
  table.reserve(table_.size());
  for (const auto& entry : table_) {
    SparseVector v;
    for (const auto& [k, c] : entry) v.emplace_back(k, Scalar(field, c.value()));
    table.push_back(std::move(v));
  }
  return std::make_shared<Algebra>(name_, field, vertices_, basis_, std::move(table));
}

std::string Algebra::describe() const {
  std::ostringstream os;
  os << "algebra " << name_ << " over " << field_.name() << ": " << vertex_count()
     << " vertices, dimension " << dim() << '\n';
  os << "basis:";
  for (const auto& b : basis_) os << ' ' << b.label;
  os << '\n';
  for (std::size_t u = 0; u < vertex_count(); ++u) {
    os << "  e" << vertices_[u] << "A:";
    for (std::size_t v = 0; v < vertex_count(); ++v) {
      std::size_t c = 0;
      for (const auto& b : basis_)
        if (b.source == u && b.target == v) ++c;
      os << ' ' << c;
    }
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------- morphisms

std::vector<std::string> verify_morphism(const AlgebraMorphism& m) {
  std::vector<std::string> out;
  const Algebra& s = *m.source;
  const Algebra& t = *m.target;
  if (m.transport.rows() != s.dim() || m.transport.cols() != t.dim()) {
    out.push_back("transport matrix has wrong shape");
    return out;
  }
  const bool anti = m.kind == MorphismKind::Opposite;
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j) {
      std::vector<Scalar> lhs(t.dim(), Scalar::zero(t.field()));
      for (const auto& [k, c] : s.product(i, j)) {
        auto row = m.transport.row(k);
        for (std::size_t x = 0; x < t.dim(); ++x) lhs[x] += c * row[x];
      }
      auto ri = m.transport.row(i), rj = m.transport.row(j);
      auto rhs = anti ? t.multiply(rj, ri) : t.multiply(ri, rj);
      if (lhs != rhs)
        out.push_back("morphism not multiplicative on (" + s.element(i).label + ", " +
                      s.element(j).label + ")");
    }
  return out;
}

// ---------------------------------------------------------------- build

namespace {

struct Path {
  std::size_t source;
  std::size_t target;
  std::vector<std::size_t> arrows;
  std::size_t length() const { return arrows.size(); }
};

bool path_less(const Path& a, const Path& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  if (a.length() == 0) return a.source < b.source;
  return a.arrows < b.arrows;
}

// All paths of length <= max_len, sorted by length then lexicographically.
std::vector<Path> enumerate_paths(const Quiver& q, std::size_t max_len) {
  std::vector<Path> all;
  std::vector<Path> layer;
  for (std::size_t v = 0; v < q.vertices().size(); ++v) layer.push_back({v, v, {}});
  all = layer;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Path> next;
    for (const auto& p : layer)
      for (std::size_t a = 0; a < q.arrows().size(); ++a)
        if (q.arrows()[a].source == p.target) {
          Path np = p;
          np.arrows.push_back(a);
          np.target = q.arrows()[a].target;
          next.push_back(std::move(np));
        }
    if (next.empty()) break;
    std::sort(next.begin(), next.end(), path_less);
    all.insert(all.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return all;
}

using PathKey = std::pair<std::size_t, std::vector<std::size_t>>;
PathKey key_of(const Path& p) { return {p.source, p.arrows}; }

struct ConvertedRelation {
  std::size_t source, target;
  std::size_t min_len, max_len;
  std::vector<std::pair<Scalar, std::vector<std::size_t>>> terms;
};

// Vectors u*r*v over paths of length <= cap.  When `truncate` is set, terms
// longer than cap are dropped and only products whose shortest term fits are
// generated; otherwise only products whose longest term fits are generated.
Matrix ideal_generators(const std::vector<ConvertedRelation>& rels, const std::vector<Path>& paths,
                        const std::map<PathKey, std::size_t>& column, std::size_t cap, bool truncate,
                        FieldSpec field) {
  Matrix rows(field, 0, paths.size());
  for (const auto& r : rels) {
    std::size_t need = truncate ? r.min_len : r.max_len;
    if (need > cap) continue;
    std::size_t slack = cap - need;
    if (truncate && slack == 0) continue;  // only terms of length >= cap: all dropped
    for (const auto& u : paths) {
      if (u.target != r.source || u.length() > slack) continue;
      for (const auto& v : paths) {
        if (v.source != r.target || u.length() + v.length() > slack) continue;
        if (truncate && u.length() + v.length() + r.min_len >= cap) continue;
        std::vector<Scalar> row(paths.size(), Scalar::zero(field));
        bool any = false;
        for (const auto& [c, word] : r.terms) {
          std::vector<std::size_t> w = u.arrows;
          w.insert(w.end(), word.begin(), word.end());
          w.insert(w.end(), v.arrows.begin(), v.arrows.end());
          auto it = column.find({u.source, w});
          if (it == column.end()) continue;  // longer than cap
          row[it->second] += c;
          any = true;
        }
        if (any) rows.append_row(row);
      }
    }
  }
  return rows;
}

std::string path_label(const Quiver& q, const Path& p) {
  if (p.length() == 0) return "e" + q.vertices()[p.source];
  std::string s;
  for (std::size_t i = 0; i < p.arrows.size(); ++i) {
    if (i) s += '*';
    s += q.arrows()[p.arrows[i]].name;
  }
  return s;
}

}  // namespace

AlgebraPtr build_algebra(std::string_view text, std::size_t max_len) {
  return build_algebra(parse_algebra_file(text), max_len);
}

AlgebraPtr build_algebra(const Presentation& p, std::size_t max_len) {
  const FieldSpec field = p.field;
  const Quiver& q = p.quiver;
  std::vector<ConvertedRelation> rels;
  for (const auto& r : p.relations) {
    ConvertedRelation cr{};
    cr.min_len = std::numeric_limits<std::size_t>::max();
    for (const auto& t : r.terms) {
      if (t.arrows.size() < 2)
        throw AlgebraError("relation on line " + std::to_string(r.line) +
                           " has a term of length < 2 (not admissible)");
      cr.min_len = std::min(cr.min_len, t.arrows.size());
      cr.max_len = std::max(cr.max_len, t.arrows.size());
      cr.terms.emplace_back(Scalar(field, t.coefficient), t.arrows);
    }
    cr.source = q.arrows()[r.terms.front().arrows.front()].source;
    cr.target = q.arrows()[r.terms.front().arrows.back()].target;
    rels.push_back(std::move(cr));
  }

  // Find L with every path of length L inside the ideal.
  std::optional<std::size_t> nil_length;
  for (std::size_t cap = 1; cap <= max_len && !nil_length; ++cap) {
    auto paths = enumerate_paths(q, cap);
    std::map<PathKey, std::size_t> column;
    for (std::size_t i = 0; i < paths.size(); ++i) column[key_of(paths[i])] = i;
    Subspace span = Subspace::span(ideal_generators(rels, paths, column, cap, false, field));
    for (std::size_t k = 1; k <= cap && !nil_length; ++k) {
      bool all_in = true;
      for (std::size_t i = 0; i < paths.size() && all_in; ++i) {
        if (paths[i].length() != k) continue;
        std::vector<Scalar> unit(paths.size(), Scalar::zero(field));
        unit[i] = Scalar::one(field);
        all_in = span.contains(unit);
      }
      if (all_in) nil_length = k;
    }
  }
  if (!nil_length)
    throw AlgebraError("algebra not finite-dimensional or bound too small (max_len = " +
                       std::to_string(max_len) + ")");
  const std::size_t L = *nil_length;

  // Work in KQ / J^L: paths of length < L modulo truncated ideal elements.
  auto paths = enumerate_paths(q, L - 1);
  const std::size_t np = paths.size();
  std::map<PathKey, std::size_t> column;
  for (std::size_t i = 0; i < np; ++i) column[key_of(paths[i])] = i;
  Matrix gens = ideal_generators(rels, paths, column, L, true, field);
  // Leading term = largest path: echelonize with columns in descending order.
  std::vector<std::size_t> desc(np);
  for (std::size_t i = 0; i < np; ++i) desc[i] = np - 1 - i;
  Echelon ech = row_echelon(gens.select_cols(desc));
  std::vector<std::optional<std::size_t>> pivot_row(np);
  for (std::size_t r = 0; r < ech.rank(); ++r) pivot_row[np - 1 - ech.pivots[r]] = r;

  std::vector<std::size_t> basis_paths;
  std::vector<std::size_t> basis_pos(np, np);
  for (std::size_t i = 0; i < np; ++i)
    if (!pivot_row[i]) {
      basis_pos[i] = basis_paths.size();
      basis_paths.push_back(i);
    }

  auto reduce = [&](const Path& path) -> SparseVector {
    SparseVector out;
    if (path.length() >= L) return out;
    std::size_t c = column.at(key_of(path));
    if (!pivot_row[c]) {
      out.emplace_back(basis_pos[c], Scalar::one(field));
      return out;
    }
    auto row = ech.reduced.row(*pivot_row[c]);
    for (std::size_t j = 0; j < np; ++j) {
      std::size_t orig = np - 1 - j;
      if (orig == c || row[j].is_zero()) continue;
      out.emplace_back(basis_pos[orig], -row[j]);
    }
    return out;
  };

  std::vector<BasisElement> basis;
  for (auto i : basis_paths) {
    const Path& path = paths[i];
    basis.push_back({path.source, path.target, static_cast<unsigned>(path.length()),
                     path_label(q, path), path.arrows});
  }
  const std::size_t n = basis.size();
  std::vector<SparseVector> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Path& a = paths[basis_paths[i]];
      const Path& b = paths[basis_paths[j]];
      if (a.target != b.source) continue;
      Path c{a.source, b.target, a.arrows};
      c.arrows.insert(c.arrows.end(), b.arrows.begin(), b.arrows.end());
      table[i * n + j] = reduce(c);
    }
  return std::make_shared<Algebra>(p.name, field, q.vertices(), std::move(basis), std::move(table));
}

// ---------------------------------------------------------------- derived

namespace {

std::vector<std::size_t> checked_vertex_set(const Algebra& a, const std::vector<std::size_t>& eps) {
  if (eps.empty()) throw AlgebraError("idempotent vertex set is empty");
  std::set<std::size_t> s(eps.begin(), eps.end());
  for (auto v : s)
    if (v >= a.vertex_count()) throw AlgebraError("vertex index out of range");
  return {s.begin(), s.end()};
}

std::string vertex_set_name(const Algebra& a, const std::vector<std::size_t>& eps) {
  std::string s;
  for (auto v : eps) {
    if (!s.empty()) s += ',';
    s += a.vertices()[v];
  }
  return s;
}

}  // namespace

DerivedAlgebra corner_algebra(const AlgebraPtr& a, const std::vector<std::size_t>& eps_vertices) {
  auto eps = checked_vertex_set(*a, eps_vertices);
  std::vector<std::size_t> new_vertex(a->vertex_count(), a->vertex_count());
  std::vector<std::string> vertices;
  for (auto v : eps) {
    new_vertex[v] = vertices.size();
    vertices.push_back(a->vertices()[v]);
  }
  std::vector<std::size_t> keep;
  std::vector<std::size_t> pos(a->dim(), a->dim());
  for (std::size_t i = 0; i < a->dim(); ++i) {
    const auto& b = a->element(i);
    if (new_vertex[b.source] != a->vertex_count() && new_vertex[b.target] != a->vertex_count()) {
      pos[i] = keep.size();
      keep.push_back(i);
    }
  }
  std::vector<BasisElement> basis;
  for (auto i : keep) {
    BasisElement b = a->element(i);
    b.source = new_vertex[b.source];
    b.target = new_vertex[b.target];
    basis.push_back(std::move(b));
  }
  const std::size_t n = keep.size();
  std::vector<SparseVector> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& [k, c] : a->product(keep[i], keep[j])) {
        if (pos[k] == a->dim()) throw AlgebraError("corner is not closed under multiplication");
        table[i * n + j].emplace_back(pos[k], c);
      }
  auto corner = std::make_shared<Algebra>(a->name() + "_corner(" + vertex_set_name(*a, eps) + ")",
                                          a->field(), std::move(vertices), std::move(basis),
                                          std::move(table));
  AlgebraMorphism m;
  m.kind = MorphismKind::CornerByIdempotent;
  m.source = corner;
  m.target = a;
  m.transport = Matrix(a->field(), n, a->dim());
  for (std::size_t i = 0; i < n; ++i) m.transport(i, keep[i]) = Scalar::one(a->field());
  for (auto v : eps) m.vertex_map.push_back(v);
  return {corner, std::move(m)};
}

Subspace two_sided_ideal(const Algebra& a, const std::vector<std::vector<Scalar>>& generators) {
  Matrix rows(a.field(), 0, a.dim());
  for (const auto& g : generators)
    for (std::size_t i = 0; i < a.dim(); ++i) {
      auto left = a.multiply(a.unit_vector(i), g);
      for (std::size_t j = 0; j < a.dim(); ++j) rows.append_row(a.multiply(left, a.unit_vector(j)));
    }
  return Subspace::span(rows);
}

DerivedAlgebra quotient_by_ideal(const AlgebraPtr& a, const Subspace& ideal,
                                 const std::vector<std::size_t>& complement, std::string name) {
  Quotient q = quotient_with_complement(a->dim(), ideal, complement);
  const FieldSpec f = a->field();
  std::vector<std::optional<std::size_t>> vertex_map(a->vertex_count());
  std::vector<std::string> vertices;
  for (std::size_t v = 0; v < a->vertex_count(); ++v) {
    auto e = a->idempotent(v);
    if (e && std::find(complement.begin(), complement.end(), *e) != complement.end()) {
      vertex_map[v] = vertices.size();
      vertices.push_back(a->vertices()[v]);
    }
  }
  std::vector<BasisElement> basis;
  for (auto i : complement) {
    BasisElement b = a->element(i);
    if (!vertex_map[b.source] || !vertex_map[b.target])
      throw AlgebraError("quotient basis element '" + b.label + "' touches a collapsed vertex");
    b.source = *vertex_map[b.source];
    b.target = *vertex_map[b.target];
    basis.push_back(std::move(b));
  }
  const std::size_t n = complement.size();
  std::vector<SparseVector> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto prod = a->multiply(a->unit_vector(complement[i]), a->unit_vector(complement[j]));
      auto image = mul_row(prod, q.projection);
      for (std::size_t k = 0; k < n; ++k)
        if (!image[k].is_zero()) table[i * n + j].emplace_back(k, image[k]);
    }
  auto quotient =
      std::make_shared<Algebra>(std::move(name), f, std::move(vertices), std::move(basis), std::move(table));
  AlgebraMorphism m;
  m.kind = MorphismKind::QuotientByIdeal;
  m.source = a;
  m.target = quotient;
  m.transport = q.projection;
  m.vertex_map = std::move(vertex_map);
  return {quotient, std::move(m)};
}

DerivedAlgebra quotient_by_idempotent_ideal(const AlgebraPtr& a,
                                            const std::vector<std::size_t>& eps_vertices) {
  auto eps = checked_vertex_set(*a, eps_vertices);
  std::vector<std::vector<Scalar>> gens;
  for (auto v : eps) {
    auto e = a->idempotent(v);
    if (!e) throw AlgebraError("vertex without idempotent");
    gens.push_back(a->unit_vector(*e));
  }
  Subspace ideal = two_sided_ideal(*a, gens);
  Quotient pref = quotient_prefer_low(a->dim(), ideal);
  return quotient_by_ideal(a, ideal, pref.kept,
                           a->name() + "/<e" + vertex_set_name(*a, eps) + ">");
}

DerivedAlgebra opposite_algebra(const AlgebraPtr& a) {
  const std::size_t n = a->dim();
  std::vector<BasisElement> basis = a->basis();
  for (auto& b : basis) {
    std::swap(b.source, b.target);
    std::reverse(b.path.begin(), b.path.end());
  }
  std::vector<SparseVector> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i * n + j] = a->product(j, i);
  std::string name = a->name();
  if (name.size() > 3 && name.ends_with("^op"))
    name.resize(name.size() - 3);
  else
    name += "^op";
  auto op = std::make_shared<Algebra>(std::move(name), a->field(), a->vertices(), std::move(basis),
                                      std::move(table));
  AlgebraMorphism m;
  m.kind = MorphismKind::Opposite;
  m.source = a;
  m.target = op;
  m.transport = Matrix::identity(a->field(), n);
  for (std::size_t v = 0; v < a->vertex_count(); ++v) m.vertex_map.push_back(v);
  return {op, std::move(m)};
}

// ---------------------------------------------------------------- axioms

std::vector<std::string> verify_algebra_axioms(const Algebra& a) {
  std::vector<std::string> diag;
  const std::size_t n = a.dim();
  const FieldSpec f = a.field();
  auto label = [&](std::size_t i) { return a.element(i).label; };

  for (std::size_t v = 0; v < a.vertex_count(); ++v)
    if (!a.idempotent(v)) diag.push_back("idempotent axiom failed: no idempotent at vertex " + a.vertices()[v]);

  // Peirce grading and idempotent behaviour.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& bi = a.element(i);
      const auto& bj = a.element(j);
      const auto& prod = a.product(i, j);
      if (bi.target != bj.source) {
        if (!prod.empty())
          diag.push_back("Peirce grading failed: " + label(i) + "*" + label(j) + " should vanish");
        continue;
      }
      for (const auto& [k, c] : prod)
        if (a.element(k).source != bi.source || a.element(k).target != bj.target)
          diag.push_back("Peirce grading failed: " + label(i) + "*" + label(j) + " leaves its block");
      auto expect_is = [&](std::size_t k) {
        return prod.size() == 1 && prod[0].first == k && prod[0].second.is_one();
      };
      if (a.is_idempotent(i) && !expect_is(j))
        diag.push_back("idempotent axiom failed: " + label(i) + "*" + label(j) + " != " + label(j));
      else if (a.is_idempotent(j) && !a.is_idempotent(i) && !expect_is(i))
        diag.push_back("idempotent axiom failed: " + label(i) + "*" + label(j) + " != " + label(i));
    }

  // Associativity.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (a.product(i, j).empty() && a.element(i).target != a.element(j).source) continue;
      std::vector<Scalar> ij(n, Scalar::zero(f));
      for (const auto& [k, c] : a.product(i, j)) ij[k] = c;
      for (std::size_t k = 0; k < n; ++k) {
        auto lhs = a.multiply(ij, a.unit_vector(k));
        auto jk = a.multiply(a.unit_vector(j), a.unit_vector(k));
        auto rhs = a.multiply(a.unit_vector(i), jk);
        if (lhs != rhs)
          diag.push_back("associativity failed on (" + label(i) + ", " + label(j) + ", " + label(k) + ")");
      }
    }

  // Radical nilpotency: rad^k = 0 for some k <= n + 1.
  Matrix power(f, 0, n);
  for (auto r : a.radical_basis()) power.append_row(a.unit_vector(r));
  Subspace current = Subspace::span(power);
  std::size_t steps = 0;
  while (current.dim() > 0 && steps <= n) {
    Matrix next(f, 0, n);
    for (std::size_t i = 0; i < current.dim(); ++i)
      for (auto r : a.radical_basis()) next.append_row(a.multiply(current.basis().row(i), a.unit_vector(r)));
    current = Subspace::span(next);
    ++steps;
  }
  if (current.dim() > 0) diag.push_back("radical is not nilpotent");
  return diag;
}

}  // namespace exrep
