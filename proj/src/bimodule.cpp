#include "exrep/bimodule.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace exrep {

namespace {

using Grade = std::pair<std::size_t, std::size_t>;

bool same_algebra(const AlgebraPtr& x, const AlgebraPtr& y) { return x == y || x->same_as(*y); }

void require_over(const RightModule& m, const AlgebraPtr& a, const std::string& what) {
  if (!same_algebra(m.algebra(), a))
    throw ModuleError(what + " expects a module over " + a->name() + ", got one over " + m.algebra()->name());
}

// Sum of transport(c, k) * mats[k] over the target basis.
Matrix transported(const AlgebraMorphism& phi, std::size_t c, const std::vector<Matrix>& mats, FieldSpec f,
                   std::size_t n) {
  Matrix out(f, n, n);
  for (std::size_t k = 0; k < phi.transport.cols(); ++k) {
    const Scalar& s = phi.transport(c, k);
    if (!s.is_zero()) out += s * mats[k];
  }
  return out;
}

// Unique preimage vertex of each target vertex (nullopt if none).
std::vector<std::optional<std::size_t>> vertex_preimages(const AlgebraMorphism& phi) {
  std::vector<std::optional<std::size_t>> pre(phi.target->vertex_count());
  for (std::size_t c = 0; c < phi.vertex_map.size(); ++c) {
    if (!phi.vertex_map[c]) continue;
    auto& slot = pre[*phi.vertex_map[c]];
    if (slot) throw AlgebraError("restriction along a morphism that identifies vertices");
    slot = c;
  }
  return pre;
}

Matrix diagonal_projection(FieldSpec f, const std::vector<Grade>& grades, bool left_side, std::size_t vertex) {
  Matrix p(f, grades.size(), grades.size());
  for (std::size_t i = 0; i < grades.size(); ++i)
    if ((left_side ? grades[i].first : grades[i].second) == vertex) p(i, i) = Scalar::one(f);
  return p;
}

std::string describe_module(const RightModule& m) {
  if (!m.label().empty()) return m.label();
  return layer_label(m);
}

std::vector<Scalar> flatten_blocks(const ModuleMap& f, FieldSpec field) {
  std::vector<Scalar> out;
  for (const auto& b : f.blocks)
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (std::size_t c = 0; c < b.cols(); ++c) out.push_back(b(r, c));
  (void)field;
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Bimodule

Bimodule::Bimodule(AlgebraPtr left_algebra, AlgebraPtr right_algebra, std::vector<Grade> grades,
                   std::vector<Matrix> left, std::vector<Matrix> right, std::string name)
    : left_alg_(std::move(left_algebra)),
      right_alg_(std::move(right_algebra)),
      grades_(std::move(grades)),
      left_(std::move(left)),
      right_(std::move(right)),
      name_(std::move(name)) {
  const auto& a = *left_alg_;
  const auto& b = *right_alg_;
  if (a.field() != b.field()) throw ModuleError("bimodule over algebras with different fields");
  const FieldSpec f = a.field();
  const std::size_t n = grades_.size();
  if (left_.size() != a.dim() || right_.size() != b.dim())
    throw ModuleError("bimodule needs one matrix per basis element on each side");
  for (const auto& [u, w] : grades_)
    if (u >= a.vertex_count() || w >= b.vertex_count()) throw ModuleError("bimodule grade out of range");
  for (const auto* side : {&left_, &right_})
    for (const auto& m : *side)
      if (m.rows() != n || m.cols() != n) throw ModuleError("bimodule action matrix has the wrong shape");

  for (std::size_t v = 0; v < a.vertex_count(); ++v)
    if (auto e = a.idempotent(v); e && !(left_[*e] == diagonal_projection(f, grades_, true, v)))
      throw ModuleError("left action of " + a.element(*e).label + " is not the grade projection");
  for (std::size_t v = 0; v < b.vertex_count(); ++v)
    if (auto e = b.idempotent(v); e && !(right_[*e] == diagonal_projection(f, grades_, false, v)))
      throw ModuleError("right action of " + b.element(*e).label + " is not the grade projection");

  // Module axioms on pairs that generate all products: (generator or
  // idempotent) x anything, and anything x idempotent.
  auto check_side = [&](const Algebra& alg, const std::vector<Matrix>& act, bool is_left) {
    std::vector<std::size_t> firsts = alg.generators();
    for (std::size_t v = 0; v < alg.vertex_count(); ++v)
      if (auto e = alg.idempotent(v)) firsts.push_back(*e);
    auto expect = [&](std::size_t i, std::size_t j) {
      Matrix want(f, n, n);
      for (const auto& [k, c] : alg.product(i, j)) want += c * act[k];
      Matrix got = is_left ? act[j] * act[i] : act[i] * act[j];
      if (!(got == want))
        throw ModuleError(std::string(is_left ? "left" : "right") + " bimodule axiom failed on (" +
                          alg.element(i).label + ", " + alg.element(j).label + ")");
    };
    for (auto i : firsts)
      for (std::size_t j = 0; j < alg.dim(); ++j) expect(i, j);
    for (std::size_t i = 0; i < alg.dim(); ++i)
      for (std::size_t v = 0; v < alg.vertex_count(); ++v)
        if (auto e = alg.idempotent(v)) expect(i, *e);
  };
  check_side(a, left_, true);
  check_side(b, right_, false);
  for (auto g : a.generators())
    for (auto h : b.generators())
      if (!(left_[g] * right_[h] == right_[h] * left_[g]))
        throw ModuleError("left action of " + a.element(g).label + " does not commute with right action of " +
                          b.element(h).label);
}

std::vector<std::size_t> Bimodule::with_left_grade(std::size_t u) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < grades_.size(); ++i)
    if (grades_[i].first == u) out.push_back(i);
  return out;
}

std::vector<std::size_t> Bimodule::with_right_grade(std::size_t w) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < grades_.size(); ++i)
    if (grades_[i].second == w) out.push_back(i);
  return out;
}

RightModule Bimodule::as_right_module() const {
  const auto& b = *right_alg_;
  std::vector<std::vector<std::size_t>> idx;
  std::vector<std::size_t> dims;
  for (std::size_t w = 0; w < b.vertex_count(); ++w) {
    idx.push_back(with_right_grade(w));
    dims.push_back(idx.back().size());
  }
  std::vector<Matrix> actions;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const auto& e = b.element(i);
    actions.push_back(right_[i].select_rows(idx[e.source]).select_cols(idx[e.target]));
  }
  return RightModule(right_alg_, std::move(dims), std::move(actions), name_);
}

RightModule Bimodule::as_left_module() const {
  auto op = opposite_algebra(left_alg_).algebra;
  std::vector<std::vector<std::size_t>> idx;
  std::vector<std::size_t> dims;
  for (std::size_t u = 0; u < op->vertex_count(); ++u) {
    idx.push_back(with_left_grade(u));
    dims.push_back(idx.back().size());
  }
  std::vector<Matrix> actions;
  for (std::size_t i = 0; i < op->dim(); ++i) {
    const auto& e = op->element(i);  // source/target already swapped
    actions.push_back(left_[i].select_rows(idx[e.source]).select_cols(idx[e.target]));
  }
  return RightModule(op, std::move(dims), std::move(actions), name_);
}

Bimodule regular_bimodule(const AlgebraPtr& a) {
  const std::size_t n = a->dim();
  const FieldSpec f = a->field();
  std::vector<Grade> grades;
  for (const auto& b : a->basis()) grades.emplace_back(b.source, b.target);
  std::vector<Matrix> left(n, Matrix(f, n, n)), right(n, Matrix(f, n, n));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      for (const auto& [k, c] : a->product(x, y)) {
        right[y](x, k) += c;  // x * right(y) = x y
        left[x](y, k) += c;   // y * left(x) = x y
      }
    }
  return Bimodule(a, a, std::move(grades), std::move(left), std::move(right), a->name());
}

Bimodule restrict_left(const Bimodule& x, const AlgebraMorphism& phi) {
  if (!same_algebra(phi.target, x.left_algebra()))
    throw AlgebraError("restrict_left: morphism target is not the left algebra");
  const FieldSpec f = x.left_algebra()->field();
  auto pre = vertex_preimages(phi);
  std::vector<std::size_t> keep;
  std::vector<Grade> grades;
  for (std::size_t j = 0; j < x.dim(); ++j)
    if (auto c = pre[x.grades()[j].first]) {
      keep.push_back(j);
      grades.emplace_back(*c, x.grades()[j].second);
    }
  std::vector<Matrix> all_left;
  for (std::size_t k = 0; k < x.left_algebra()->dim(); ++k) all_left.push_back(x.left(k));
  std::vector<Matrix> left, right;
  for (std::size_t c = 0; c < phi.source->dim(); ++c)
    left.push_back(transported(phi, c, all_left, f, x.dim()).select_rows(keep).select_cols(keep));
  for (std::size_t b = 0; b < x.right_algebra()->dim(); ++b)
    right.push_back(x.right(b).select_rows(keep).select_cols(keep));
  return Bimodule(phi.source, x.right_algebra(), std::move(grades), std::move(left), std::move(right), x.name());
}

Bimodule restrict_right(const Bimodule& x, const AlgebraMorphism& phi) {
  if (!same_algebra(phi.target, x.right_algebra()))
    throw AlgebraError("restrict_right: morphism target is not the right algebra");
  const FieldSpec f = x.right_algebra()->field();
  auto pre = vertex_preimages(phi);
  std::vector<std::size_t> keep;
  std::vector<Grade> grades;
  for (std::size_t j = 0; j < x.dim(); ++j)
    if (auto c = pre[x.grades()[j].second]) {
      keep.push_back(j);
      grades.emplace_back(x.grades()[j].first, *c);
    }
  std::vector<Matrix> all_right;
  for (std::size_t k = 0; k < x.right_algebra()->dim(); ++k) all_right.push_back(x.right(k));
  std::vector<Matrix> left, right;
  for (std::size_t a = 0; a < x.left_algebra()->dim(); ++a)
    left.push_back(x.left(a).select_rows(keep).select_cols(keep));
  for (std::size_t c = 0; c < phi.source->dim(); ++c)
    right.push_back(transported(phi, c, all_right, f, x.dim()).select_rows(keep).select_cols(keep));
  return Bimodule(x.left_algebra(), phi.source, std::move(grades), std::move(left), std::move(right), x.name());
}

Bimodule sub_bimodule(const Bimodule& x, const Matrix& rows, std::string name) {
  const FieldSpec f = x.left_algebra()->field();
  Matrix basis = rows.rows() ? Subspace::span(rows).basis() : Matrix(f, 0, x.dim());
  if (basis.cols() != x.dim()) basis = Matrix(f, 0, x.dim());
  std::vector<Grade> grades;
  for (std::size_t r = 0; r < basis.rows(); ++r) {
    std::optional<Grade> g;
    for (std::size_t c = 0; c < x.dim(); ++c) {
      if (basis(r, c).is_zero()) continue;
      if (g && *g != x.grades()[c]) throw ModuleError("sub-bimodule basis vector mixes grades");
      g = x.grades()[c];
    }
    grades.push_back(*g);
  }
  auto induced = [&](const Matrix& act) {
    Matrix image = basis * act;
    auto sol = solve_right(basis, image);
    if (!sol.particular) throw ModuleError("rows do not span a sub-bimodule");
    return *sol.particular;
  };
  std::vector<Matrix> left, right;
  for (std::size_t a = 0; a < x.left_algebra()->dim(); ++a) left.push_back(induced(x.left(a)));
  for (std::size_t b = 0; b < x.right_algebra()->dim(); ++b) right.push_back(induced(x.right(b)));
  return Bimodule(x.left_algebra(), x.right_algebra(), std::move(grades), std::move(left), std::move(right),
                  name.empty() ? x.name() : std::move(name));
}

Bimodule direct_sum(const Bimodule& x, const Bimodule& y) {
  if (!same_algebra(x.left_algebra(), y.left_algebra()) || !same_algebra(x.right_algebra(), y.right_algebra()))
    throw ModuleError("direct sum of bimodules over different algebras");
  const FieldSpec f = x.left_algebra()->field();
  std::vector<Grade> grades = x.grades();
  grades.insert(grades.end(), y.grades().begin(), y.grades().end());
  std::vector<Matrix> left, right;
  for (std::size_t a = 0; a < x.left_algebra()->dim(); ++a)
    left.push_back(Matrix::block_diagonal(f, {x.left(a), y.left(a)}));
  for (std::size_t b = 0; b < x.right_algebra()->dim(); ++b)
    right.push_back(Matrix::block_diagonal(f, {x.right(b), y.right(b)}));
  return Bimodule(x.left_algebra(), x.right_algebra(), std::move(grades), std::move(left), std::move(right),
                  x.name() + "+" + y.name());
}

// ---------------------------------------------------------------- restriction

RightModule restrict_module(const RightModule& m, const AlgebraMorphism& phi) {
  require_over(m, phi.target, "restriction");
  const auto& c = *phi.source;
  const FieldSpec f = c.field();
  std::vector<std::size_t> dims;
  for (std::size_t v = 0; v < c.vertex_count(); ++v) dims.push_back(phi.vertex_map[v] ? m.dim(*phi.vertex_map[v]) : 0);
  std::vector<Matrix> actions;
  for (std::size_t i = 0; i < c.dim(); ++i) {
    const auto& e = c.element(i);
    Matrix acc(f, dims[e.source], dims[e.target]);
    if (phi.vertex_map[e.source] && phi.vertex_map[e.target])
      for (std::size_t k = 0; k < phi.transport.cols(); ++k) {
        const Scalar& s = phi.transport(i, k);
        if (!s.is_zero()) acc += s * m.action(k);
      }
    actions.push_back(std::move(acc));
  }
  return RightModule(phi.source, std::move(dims), std::move(actions), m.label());
}

ModuleMap restrict_map(const ModuleMap& f, const AlgebraMorphism& phi) {
  ModuleMap out;
  for (std::size_t v = 0; v < phi.source->vertex_count(); ++v) {
    if (phi.vertex_map[v])
      out.blocks.push_back(f.blocks[*phi.vertex_map[v]]);
    else
      out.blocks.emplace_back(phi.source->field(), 0, 0);
  }
  return out;
}

// ---------------------------------------------------------------- tensor

namespace {

struct PairLayout {
  std::vector<std::size_t> offset;  // per basis vector j of X, within its right-grade block
  std::vector<std::size_t> count;   // per right vertex
};

PairLayout pair_layout(const RightModule& m, const Bimodule& x) {
  PairLayout p;
  p.offset.resize(x.dim());
  p.count.assign(x.right_algebra()->vertex_count(), 0);
  for (std::size_t j = 0; j < x.dim(); ++j) {
    const auto [v, w] = x.grades()[j];
    p.offset[j] = p.count[w];
    p.count[w] += m.dim(v);
  }
  return p;
}

}  // namespace

TensorResult tensor_full(const RightModule& m, const Bimodule& x) {
  require_over(m, x.left_algebra(), "tensor product");
  const auto& a = *x.left_algebra();
  const auto& b = *x.right_algebra();
  const FieldSpec f = a.field();
  const std::size_t nb = b.vertex_count();
  PairLayout lay = pair_layout(m, x);

  // Relations (m.g) (x) y - m (x) (g.y) for generators g: u -> v of A.
  std::vector<Matrix> rel;
  for (std::size_t w = 0; w < nb; ++w) rel.emplace_back(f, 0, lay.count[w]);
  for (auto g : a.generators()) {
    const auto& e = a.element(g);
    const Matrix& rho = m.action(g);
    const Matrix& lg = x.left(g);
    for (std::size_t j = 0; j < x.dim(); ++j) {
      if (x.grades()[j].first != e.target) continue;
      const std::size_t w = x.grades()[j].second;
      for (std::size_t i = 0; i < m.dim(e.source); ++i) {
        std::vector<Scalar> row(lay.count[w], Scalar::zero(f));
        bool nonzero = false;
        for (std::size_t k = 0; k < m.dim(e.target); ++k)
          if (!rho(i, k).is_zero()) {
            row[lay.offset[j] + k] += rho(i, k);
            nonzero = true;
          }
        for (std::size_t l = 0; l < x.dim(); ++l)
          if (!lg(j, l).is_zero()) {
            row[lay.offset[l] + i] -= lg(j, l);
            nonzero = true;
          }
        if (nonzero) rel[w].append_row(row);
      }
    }
  }
  TensorResult out;
  out.pair_offset = lay.offset;
  std::vector<std::size_t> dims;
  for (std::size_t w = 0; w < nb; ++w) {
    Subspace s = rel[w].rows() ? Subspace::span(rel[w]) : Subspace(f, lay.count[w]);
    out.quotients.push_back(quotient_with_section(lay.count[w], s));
    dims.push_back(out.quotients.back().dim);
  }
  std::vector<Matrix> actions;
  for (std::size_t bi = 0; bi < b.dim(); ++bi) {
    const auto& e = b.element(bi);
    if (e.degree == 0) {
      actions.emplace_back();
      continue;
    }
    Matrix t(f, lay.count[e.source], lay.count[e.target]);
    const Matrix& rb = x.right(bi);
    for (std::size_t j = 0; j < x.dim(); ++j) {
      if (x.grades()[j].second != e.source) continue;
      const std::size_t v = x.grades()[j].first;
      for (std::size_t l = 0; l < x.dim(); ++l) {
        if (rb(j, l).is_zero()) continue;
        for (std::size_t i = 0; i < m.dim(v); ++i) t(lay.offset[j] + i, lay.offset[l] + i) += rb(j, l);
      }
    }
    actions.push_back(out.quotients[e.source].section * t * out.quotients[e.target].projection);
  }
  std::string label = m.label().empty() ? std::string() : m.label() + "(x)" + x.name();
  out.module = RightModule(x.right_algebra(), std::move(dims), std::move(actions), std::move(label));
  return out;
}

RightModule tensor_with_bimodule(const RightModule& m, const Bimodule& x) { return tensor_full(m, x).module; }

ModuleMap tensor_map(const RightModule& m, const RightModule& m2, const ModuleMap& f, const Bimodule& x) {
  TensorResult t1 = tensor_full(m, x);
  TensorResult t2 = tensor_full(m2, x);
  PairLayout l1 = pair_layout(m, x);
  PairLayout l2 = pair_layout(m2, x);
  const FieldSpec field = x.left_algebra()->field();
  ModuleMap out;
  for (std::size_t w = 0; w < x.right_algebra()->vertex_count(); ++w) {
    Matrix t(field, l1.count[w], l2.count[w]);
    for (std::size_t j = 0; j < x.dim(); ++j) {
      if (x.grades()[j].second != w) continue;
      const Matrix& fv = f.blocks[x.grades()[j].first];
      for (std::size_t i = 0; i < fv.rows(); ++i)
        for (std::size_t k = 0; k < fv.cols(); ++k)
          if (!fv(i, k).is_zero()) t(l1.offset[j] + i, l2.offset[j] + k) = fv(i, k);
    }
    out.blocks.push_back(t1.quotients[w].section * t * t2.quotients[w].projection);
  }
  return out;
}

// ---------------------------------------------------------------- Hom

RightModule hom_from_bimodule(const Bimodule& x, const RightModule& n) {
  require_over(n, x.right_algebra(), "Hom from a bimodule");
  const auto& a = *x.left_algebra();
  const auto& b = *x.right_algebra();
  const FieldSpec f = a.field();
  const std::size_t na = a.vertex_count(), nb = b.vertex_count();

  // idx[u][w]: basis vectors of e_u X with right grade w.
  std::vector<std::vector<std::vector<std::size_t>>> idx(na, std::vector<std::vector<std::size_t>>(nb));
  for (std::size_t j = 0; j < x.dim(); ++j) idx[x.grades()[j].first][x.grades()[j].second].push_back(j);

  std::vector<std::vector<ModuleMap>> hom(na);
  std::vector<Matrix> flat(na);
  std::vector<std::size_t> dims;
  for (std::size_t u = 0; u < na; ++u) {
    std::vector<std::size_t> d;
    for (std::size_t w = 0; w < nb; ++w) d.push_back(idx[u][w].size());
    std::vector<Matrix> actions;
    for (std::size_t bi = 0; bi < b.dim(); ++bi) {
      const auto& e = b.element(bi);
      actions.push_back(x.right(bi).select_rows(idx[u][e.source]).select_cols(idx[u][e.target]));
    }
    RightModule eux(x.right_algebra(), d, std::move(actions));
    hom[u] = hom_basis(eux, n);
    std::size_t len = 0;
    for (std::size_t w = 0; w < nb; ++w) len += d[w] * n.dim(w);
    flat[u] = Matrix(f, 0, len);
    for (const auto& h : hom[u]) flat[u].append_row(flatten_blocks(h, f));
    dims.push_back(hom[u].size());
  }

  std::vector<Matrix> actions;
  for (std::size_t ai = 0; ai < a.dim(); ++ai) {
    const auto& e = a.element(ai);
    const std::size_t s = e.source, t = e.target;
    if (e.degree == 0 || dims[s] == 0 || dims[t] == 0) {
      actions.emplace_back(f, dims[s], dims[t]);
      continue;
    }
    // (h.a)(y) = h(a.y): for y in e_t X, a.y = y * left(a) lies in e_s X.
    Matrix images(f, 0, flat[t].cols());
    for (const auto& h : hom[s]) {
      ModuleMap ha;
      for (std::size_t w = 0; w < nb; ++w)
        ha.blocks.push_back(x.left(ai).select_rows(idx[t][w]).select_cols(idx[s][w]) * h.blocks[w]);
      images.append_row(flatten_blocks(ha, f));
    }
    auto sol = solve_right(flat[t], images);
    if (!sol.particular) throw ModuleError("Hom from a bimodule: image is not a homomorphism");
    actions.push_back(*sol.particular);
  }
  std::string label = n.label().empty() ? std::string() : "Hom(" + x.name() + "," + n.label() + ")";
  return RightModule(x.left_algebra(), std::move(dims), std::move(actions), std::move(label));
}

// ---------------------------------------------------------------- functors

std::string functor_name(FunctorKind k) {
  switch (k) {
    case FunctorKind::TensorUpR: return "-(x)_A R";
    case FunctorKind::TensorDownA: return "-(x)_R A";
    case FunctorKind::HomUp: return "Hom_A(R,-)";
    case FunctorKind::HomDown: return "Hom_R(A,-)";
    case FunctorKind::ResSigma: return "res_sigma";
    case FunctorKind::ResXi: return "res_xi";
    case FunctorKind::IStar: return "i_*";
    case FunctorKind::IUpperStar: return "i^*";
    case FunctorKind::IShriek: return "i^!";
    case FunctorKind::JLower: return "j_!";
    case FunctorKind::JUpperStar: return "j^*";
    case FunctorKind::JStar: return "j_*";
  }
  return "?";
}

std::optional<RightModule> FunctorCache::find(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = table_.find(key);
  if (it == table_.end()) return std::nullopt;
  ++hits_;
  return it->second;
}

void FunctorCache::store(const std::string& key, const RightModule& m) {
  std::lock_guard lock(mu_);
  table_.insert_or_assign(key, m);
}

std::size_t FunctorCache::size() const {
  std::lock_guard lock(mu_);
  return table_.size();
}

std::size_t FunctorCache::hits() const {
  std::lock_guard lock(mu_);
  return hits_;
}

namespace {

template <class Compute>
RightModule cached(const std::shared_ptr<FunctorCache>& cache, FunctorKind kind, const std::string& context,
                   const RightModule& m, Compute&& compute) {
  std::string key = functor_name(kind) + "@" + context + "#" + m.fingerprint();
  if (cache)
    if (auto hit = cache->find(key)) return *hit;
  RightModule out = compute();
  if (cache) cache->store(key, out);
  return out;
}

}  // namespace

RightModule SplitExtension::apply(FunctorKind kind, const RightModule& m) const {
  return cached(cache, kind, context, m, [&]() -> RightModule {
    switch (kind) {
      case FunctorKind::TensorUpR: require_over(m, a, functor_name(kind)); return tensor_with_bimodule(m, r_ar);
      case FunctorKind::TensorDownA: require_over(m, r, functor_name(kind)); return tensor_with_bimodule(m, a_ra);
      case FunctorKind::HomUp: require_over(m, a, functor_name(kind)); return hom_from_bimodule(r_ra, m);
      case FunctorKind::HomDown: require_over(m, r, functor_name(kind)); return hom_from_bimodule(a_ar, m);
      case FunctorKind::ResSigma: return restrict_module(m, sigma);
      case FunctorKind::ResXi: return restrict_module(m, xi);
      default: throw ModuleError("functor " + functor_name(kind) + " is not part of a split extension");
    }
  });
}

RightModule Recollement::apply(FunctorKind kind, const RightModule& m) const {
  return cached(cache, kind, context, m, [&]() -> RightModule {
    switch (kind) {
      case FunctorKind::IStar: return restrict_module(m, pi);
      case FunctorKind::IUpperStar:
        require_over(m, a, functor_name(kind));
        return tensor_with_bimodule(m, abar_a_abar);
      case FunctorKind::IShriek: require_over(m, a, functor_name(kind)); return hom_from_bimodule(abar_abar_a, m);
      case FunctorKind::JLower: require_over(m, atilde, functor_name(kind)); return tensor_with_bimodule(m, epsa);
      case FunctorKind::JUpperStar: return restrict_module(m, iota);
      case FunctorKind::JStar: require_over(m, atilde, functor_name(kind)); return hom_from_bimodule(aeps, m);
      default: throw ModuleError("functor " + functor_name(kind) + " is not part of a recollement");
    }
  });
}

// ---------------------------------------------------------------- split extensions

SplitExtension build_split_extension(const AlgebraPtr& r, const std::vector<std::string>& kernel_arrows) {
  const FieldSpec f = r->field();
  std::vector<std::size_t> arrow_ids;
  std::vector<std::vector<Scalar>> gens;
  for (const auto& name : kernel_arrows) {
    auto i = r->find_label(name);
    if (!i || r->element(*i).degree != 1 || r->element(*i).path.size() != 1)
      throw AlgebraError("unknown kernel arrow '" + name + "'");
    arrow_ids.push_back(r->element(*i).path.front());
    gens.push_back(r->unit_vector(*i));
  }
  SplitExtension s;
  s.r = r;
  s.q = two_sided_ideal(*r, gens);
  for (std::size_t i = 0; i < r->dim(); ++i) {
    const auto& p = r->element(i).path;
    if (std::none_of(p.begin(), p.end(), [&](std::size_t x) {
          return std::find(arrow_ids.begin(), arrow_ids.end(), x) != arrow_ids.end();
        }))
      s.complement.push_back(i);
  }
  if (s.q.dim() + s.complement.size() != r->dim())
    throw AlgebraError("kernel arrows do not split: dim Q = " + std::to_string(s.q.dim()) + ", " +
                       std::to_string(s.complement.size()) + " arrow-free basis elements, dim R = " +
                       std::to_string(r->dim()));
  std::vector<bool> in_complement(r->dim(), false);
  for (auto i : s.complement) in_complement[i] = true;
  for (auto i : s.complement)
    for (auto j : s.complement)
      for (const auto& [k, c] : r->product(i, j))
        if (!in_complement[k])
          throw AlgebraError("arrow-free part is not a subalgebra: " + r->element(i).label + "*" +
                             r->element(j).label + " involves " + r->element(k).label);

  std::string suffix;
  for (const auto& name : kernel_arrows) suffix += (suffix.empty() ? "" : ",") + name;
  DerivedAlgebra quo;
  try {
    quo = quotient_by_ideal(r, s.q, s.complement, r->name() + "/<" + suffix + ">");
  } catch (const LinalgError&) {
    throw AlgebraError("arrow-free basis elements do not complement the ideal of the kernel arrows");
  }
  s.a = quo.algebra;
  s.xi = quo.morphism;
  s.sigma.kind = MorphismKind::Section;
  s.sigma.source = s.a;
  s.sigma.target = r;
  s.sigma.transport = Matrix(f, s.a->dim(), r->dim());
  for (std::size_t k = 0; k < s.complement.size(); ++k) s.sigma.transport(k, s.complement[k]) = Scalar::one(f);
  s.sigma.vertex_map.assign(s.a->vertex_count(), std::nullopt);
  for (std::size_t v = 0; v < r->vertex_count(); ++v)
    if (auto t = s.xi.vertex_map[v]) s.sigma.vertex_map[*t] = v;
  if (auto diag = verify_morphism(s.sigma); !diag.empty())
    throw AlgebraError("section is not an algebra map: " + diag.front());

  Bimodule reg_r = regular_bimodule(r);
  Bimodule reg_a = regular_bimodule(s.a);
  Bimodule q_rr = sub_bimodule(reg_r, s.q.basis(), "Q");
  s.q_aa = restrict_left(restrict_right(q_rr, s.sigma), s.sigma);
  s.r_ar = restrict_left(reg_r, s.sigma);
  s.a_ra = restrict_left(reg_a, s.xi);
  s.r_ra = restrict_right(reg_r, s.sigma);
  s.a_ar = restrict_right(reg_a, s.xi);
  s.is_projective_left = is_projective_module(s.r_ar.as_left_module());
  s.context = "split:" + r->fingerprint() + "|" + suffix;
  return s;
}

// ---------------------------------------------------------------- recollements

Recollement build_recollement(const AlgebraPtr& a, const std::vector<std::size_t>& eps_vertices) {
  Recollement rec;
  rec.a = a;
  rec.eps = eps_vertices;
  std::sort(rec.eps.begin(), rec.eps.end());
  rec.eps.erase(std::unique(rec.eps.begin(), rec.eps.end()), rec.eps.end());
  auto quo = quotient_by_idempotent_ideal(a, rec.eps);
  auto corner = corner_algebra(a, rec.eps);
  rec.abar = quo.algebra;
  rec.pi = quo.morphism;
  rec.atilde = corner.algebra;
  rec.iota = corner.morphism;

  Bimodule reg_a = regular_bimodule(a);
  Bimodule reg_abar = regular_bimodule(rec.abar);
  rec.abar_a_abar = restrict_left(reg_abar, rec.pi);
  rec.abar_abar_a = restrict_right(reg_abar, rec.pi);
  rec.epsa = restrict_left(reg_a, rec.iota);
  rec.aeps = restrict_right(reg_a, rec.iota);
  rec.i_upper_exact = is_projective_module(rec.abar_a_abar.as_left_module());
  rec.i_shriek_exact = is_projective_module(rec.abar_abar_a.as_right_module());
  std::string eps;
  for (auto v : rec.eps) eps += (eps.empty() ? "" : ",") + a->vertices()[v];
  rec.context = "recollement:" + a->fingerprint() + "|" + eps;
  return rec;
}

// ---------------------------------------------------------------- short exact sequences

ShortExact random_short_exact(const RightModule& m, std::uint32_t seed) {
  const FieldSpec f = m.field();
  std::mt19937 rng(seed);
  Matrix gen(f, 0, m.total_dim());
  std::vector<std::size_t> support;
  for (std::size_t v = 0; v < m.dims().size(); ++v)
    if (m.dim(v) > 0) support.push_back(v);
  if (!support.empty()) {
    const std::size_t v = support[std::uniform_int_distribution<std::size_t>(0, support.size() - 1)(rng)];
    std::uniform_int_distribution<long> dist(-2, 2);
    std::vector<Scalar> row(m.total_dim(), Scalar::zero(f));
    bool nonzero = false;
    for (std::size_t i = 0; i < m.dim(v); ++i) {
      row[m.offset(v) + i] = Scalar(f, dist(rng));
      nonzero = nonzero || !row[m.offset(v) + i].is_zero();
    }
    if (!nonzero) row[m.offset(v)] = Scalar::one(f);
    gen.append_row(row);
  }
  Submodule sub = generated_submodule(m, gen);
  QuotientModule quo = quotient_module(m, sub);
  return {sub.module, m, quo.module, sub.inclusion, quo.projection};
}

bool is_short_exact(const ShortExact& s) {
  if (!is_homomorphism(s.sub, s.mid, s.inc) || !is_homomorphism(s.mid, s.quot, s.proj)) return false;
  if (!compose(s.inc, s.proj).is_zero()) return false;
  if (s.mid.total_dim() != s.sub.total_dim() + s.quot.total_dim()) return false;
  return rank(s.inc.total(s.sub, s.mid)) == s.sub.total_dim() &&
         rank(s.proj.total(s.mid, s.quot)) == s.quot.total_dim();
}

// ---------------------------------------------------------------- law checks

std::vector<RightModule> module_samples(const AlgebraPtr& a) {
  std::vector<RightModule> out;
  std::vector<std::string> seen;
  auto add = [&](RightModule m) {
    if (m.is_zero()) return;
    auto fp = m.fingerprint();
    if (std::find(seen.begin(), seen.end(), fp) != seen.end()) return;
    seen.push_back(std::move(fp));
    out.push_back(std::move(m));
  };
  const std::size_t n = a->vertex_count();
  for (std::size_t v = 0; v < n; ++v) add(simple_module(a, v).with_label("S" + a->vertices()[v]));
  for (std::size_t v = 0; v < n; ++v) add(projective_module(a, v).with_label("P" + a->vertices()[v]));
  for (std::size_t v = 0; v < n; ++v) add(injective_module(a, v).with_label("I" + a->vertices()[v]));
  if (n <= 4)
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      std::vector<std::size_t> support;
      std::string label = "thin:";
      for (std::size_t v = 0; v < n; ++v)
        if (mask >> v & 1) {
          label += (support.empty() ? "" : ",") + a->vertices()[v];
          support.push_back(v);
        }
      try {
        add(thin_module(a, support).with_label(label));
      } catch (const ModuleError&) {
      }
    }
  return out;
}

RecollementSamples default_samples(const Recollement& rec) {
  return {module_samples(rec.a), module_samples(rec.abar), module_samples(rec.atilde)};
}

LawReport verify_recollement_laws(const Recollement& rec, const RecollementSamples& samples, std::uint32_t seed) {
  LawReport rep;
  rep.jstar_note =
      "j_* = Hom_Atilde(A eps, -): the eps A form is a left Atilde-module and does not accept right "
      "Atilde-modules, so the A eps bimodule is used";
  auto fail = [&](std::string law, std::string detail) { rep.failures.push_back({std::move(law), std::move(detail)}); };
  auto check = [&](bool ok, const std::string& law, const std::string& detail) {
    ++rep.checks;
    if (!ok) fail(law, detail);
  };
  auto F = [&](FunctorKind k, const RightModule& m) { return rec.apply(k, m); };
  auto iso = [&](const RightModule& x, const RightModule& y, const std::string& law, const std::string& what) {
    ++rep.checks;
    auto r = iso_test(x, y);
    if (r) return;
    fail(law, what + (r.inconclusive ? " (isomorphism test inconclusive)" : " not isomorphic"));
  };
  using K = FunctorKind;

  // (1) i^* j_! = 0 and i^! j_* = 0.
  for (const auto& n : samples.over_atilde) {
    check(F(K::IUpperStar, F(K::JLower, n)).is_zero(), "(1) i^* j_! = 0", "i^* j_!(" + describe_module(n) + ") != 0");
    check(F(K::IShriek, F(K::JStar, n)).is_zero(), "(1) i^! j_* = 0", "i^! j_*(" + describe_module(n) + ") != 0");
  }

  // (2) i_* and j^* are exact (on random short exact sequences).
  std::uint32_t s = seed;
  for (const auto& x : samples.over_abar) {
    ShortExact e = random_short_exact(x, s++);
    ShortExact img{F(K::IStar, e.sub), F(K::IStar, e.mid), F(K::IStar, e.quot), restrict_map(e.inc, rec.pi),
                   restrict_map(e.proj, rec.pi)};
    check(is_short_exact(img), "(2) i_* exact", "on a sequence through " + describe_module(x));
  }
  for (const auto& m : samples.over_a) {
    ShortExact e = random_short_exact(m, s++);
    ShortExact img{F(K::JUpperStar, e.sub), F(K::JUpperStar, e.mid), F(K::JUpperStar, e.quot),
                   restrict_map(e.inc, rec.iota), restrict_map(e.proj, rec.iota)};
    check(is_short_exact(img), "(2) j^* exact", "on a sequence through " + describe_module(m));
  }

  // (3) unit/counit isomorphisms.
  for (const auto& x : samples.over_abar) {
    RightModule ix = F(K::IStar, x);
    iso(F(K::IUpperStar, ix), x, "(3) i^* i_* ~ 1", "i^* i_*(" + describe_module(x) + ")");
    iso(F(K::IShriek, ix), x, "(3) i^! i_* ~ 1", "i^! i_*(" + describe_module(x) + ")");
  }
  for (const auto& n : samples.over_atilde) {
    iso(F(K::JUpperStar, F(K::JLower, n)), n, "(3) j^* j_! ~ 1", "j^* j_!(" + describe_module(n) + ")");
    iso(F(K::JUpperStar, F(K::JStar, n)), n, "(3) j^* j_* ~ 1", "j^* j_*(" + describe_module(n) + ")");
  }

  // (4) consequences of exactness of i^* and i^!.
  for (const auto& n : samples.over_atilde) {
    if (rec.i_upper_exact)
      check(F(K::IShriek, F(K::JLower, n)).is_zero(), "(4) i^* exact => i^! j_! = 0",
            "i^! j_!(" + describe_module(n) + ") != 0");
    if (rec.i_shriek_exact)
      check(F(K::IUpperStar, F(K::JStar, n)).is_zero(), "(4) i^! exact => i^* j_* = 0",
            "i^* j_*(" + describe_module(n) + ") != 0");
  }

  // (R1) adjunctions, compared through Hom dimensions.
  auto adj = [&](const std::string& pair, const RightModule& x, const RightModule& y, std::size_t lhs,
                 std::size_t rhs) {
    check(lhs == rhs, "(R1) adjunction " + pair,
          describe_module(x) + ", " + describe_module(y) + ": " + std::to_string(lhs) + " vs " + std::to_string(rhs));
  };
  for (const auto& m : samples.over_a) {
    for (const auto& x : samples.over_abar) {
      adj("(i^*, i_*)", m, x, hom_dim(F(K::IUpperStar, m), x), hom_dim(m, F(K::IStar, x)));
      adj("(i_*, i^!)", x, m, hom_dim(F(K::IStar, x), m), hom_dim(x, F(K::IShriek, m)));
    }
    for (const auto& n : samples.over_atilde) {
      adj("(j_!, j^*)", n, m, hom_dim(F(K::JLower, n), m), hom_dim(n, F(K::JUpperStar, m)));
      adj("(j^*, j_*)", m, n, hom_dim(F(K::JUpperStar, m), n), hom_dim(m, F(K::JStar, n)));
    }
  }

  // (R2) i_*, j_!, j_* are fully faithful (dimension level).
  for (const auto& x : samples.over_abar)
    for (const auto& y : samples.over_abar)
      check(hom_dim(F(K::IStar, x), F(K::IStar, y)) == hom_dim(x, y), "(R2) i_* fully faithful",
            describe_module(x) + ", " + describe_module(y));
  for (const auto& x : samples.over_atilde)
    for (const auto& y : samples.over_atilde) {
      const std::size_t base = hom_dim(x, y);
      check(hom_dim(F(K::JLower, x), F(K::JLower, y)) == base, "(R2) j_! fully faithful",
            describe_module(x) + ", " + describe_module(y));
      check(hom_dim(F(K::JStar, x), F(K::JStar, y)) == base, "(R2) j_* fully faithful",
            describe_module(x) + ", " + describe_module(y));
    }

  // (R3) j^* i_* = 0.
  for (const auto& x : samples.over_abar)
    check(F(K::JUpperStar, F(K::IStar, x)).is_zero(), "(R3) j^* i_* = 0", "j^* i_*(" + describe_module(x) + ") != 0");

  // If i^* and i^! are both exact, i_* and j_! are exact and preserve projectives.
  if (rec.i_upper_exact && rec.i_shriek_exact) {
    for (std::size_t v = 0; v < rec.abar->vertex_count(); ++v)
      check(is_projective_module(F(K::IStar, projective_module(rec.abar, v))), "exact i^*, i^! => i_* preserves projectives",
            "i_* P" + rec.abar->vertices()[v]);
    for (std::size_t v = 0; v < rec.atilde->vertex_count(); ++v)
      check(is_projective_module(F(K::JLower, projective_module(rec.atilde, v))),
            "exact i^*, i^! => j_! preserves projectives", "j_! P" + rec.atilde->vertices()[v]);
    for (const auto& n : samples.over_atilde) {
      ShortExact e = random_short_exact(n, s++);
      ShortExact img{F(K::JLower, e.sub), F(K::JLower, e.mid), F(K::JLower, e.quot),
                     tensor_map(e.sub, e.mid, e.inc, rec.epsa), tensor_map(e.mid, e.quot, e.proj, rec.epsa)};
      check(is_short_exact(img), "exact i^*, i^! => j_! exact", "on a sequence through " + describe_module(n));
    }
  }
  return rep;
}

}  // namespace exrep
