#include "exrep/module.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>

namespace exrep {

// ---------------------------------------------------------------- RightModule

namespace {

bool matrix_is_empty_default(const Matrix& m) { return m.rows() == 0 && m.cols() == 0; }

std::vector<std::size_t> offsets_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> off{0};
  for (auto d : dims) off.push_back(off.back() + d);
  return off;
}

}  // namespace

std::vector<std::string> verify_module_axioms(const AlgebraPtr& a, const std::vector<std::size_t>& dims,
                                              const std::vector<Matrix>& actions) {
  std::vector<std::string> diag;
  if (dims.size() != a->vertex_count()) {
    diag.push_back("dimension vector has " + std::to_string(dims.size()) + " entries, expected " +
                   std::to_string(a->vertex_count()));
    return diag;
  }
  if (actions.size() != a->dim()) {
    diag.push_back("expected one action matrix per basis element");
    return diag;
  }
  for (std::size_t i = 0; i < a->dim(); ++i) {
    const auto& b = a->element(i);
    if (actions[i].rows() != dims[b.source] || actions[i].cols() != dims[b.target])
      diag.push_back("action of " + b.label + " has shape " + std::to_string(actions[i].rows()) + "x" +
                     std::to_string(actions[i].cols()) + ", expected " + std::to_string(dims[b.source]) +
                     "x" + std::to_string(dims[b.target]));
  }
  if (!diag.empty()) return diag;
  for (auto i : a->radical_basis())
    for (auto j : a->radical_basis()) {
      const auto& bi = a->element(i);
      const auto& bj = a->element(j);
      if (bi.target != bj.source) continue;
      Matrix expected(a->field(), dims[bi.source], dims[bj.target]);
      for (const auto& [k, c] : a->product(i, j)) expected += c * actions[k];
      if (!(actions[i] * actions[j] == expected))
        diag.push_back("module axiom failed on (" + bi.label + ", " + bj.label + ")");
    }
  return diag;
}

RightModule::RightModule(AlgebraPtr algebra, std::vector<std::size_t> dims, std::vector<Matrix> actions,
                         std::string label)
    : algebra_(std::move(algebra)), dims_(std::move(dims)), actions_(std::move(actions)), label_(std::move(label)) {
  if (dims_.size() != algebra_->vertex_count())
    throw ModuleError("dimension vector has " + std::to_string(dims_.size()) + " entries, expected " +
                      std::to_string(algebra_->vertex_count()));
  if (actions_.size() != algebra_->dim()) throw ModuleError("expected one action matrix per basis element");
  offsets_ = offsets_of(dims_);
  const FieldSpec f = algebra_->field();
  for (std::size_t i = 0; i < algebra_->dim(); ++i) {
    const auto& b = algebra_->element(i);
    if (b.degree == 0) {
      actions_[i] = Matrix::identity(f, dims_[b.source]);
    } else if (matrix_is_empty_default(actions_[i]) && dims_[b.source] * dims_[b.target] == 0) {
      actions_[i] = Matrix(f, dims_[b.source], dims_[b.target]);
    } else if (actions_[i].field() != f && !actions_[i].empty()) {
      throw ModuleError("action of " + b.label + " is over " + actions_[i].field().name() + ", algebra over " +
                        f.name());
    }
  }
  auto diag = verify_module_axioms(algebra_, dims_, actions_);
  if (!diag.empty()) throw ModuleError(diag.front());
}

RightModule RightModule::from_generators(AlgebraPtr algebra, std::vector<std::size_t> dims,
                                         const std::vector<std::pair<std::size_t, Matrix>>& generator_actions,
                                         std::string label) {
  const FieldSpec f = algebra->field();
  if (dims.size() != algebra->vertex_count())
    throw ModuleError("dimension vector has " + std::to_string(dims.size()) + " entries, expected " +
                      std::to_string(algebra->vertex_count()));
  std::vector<std::optional<Matrix>> gen(algebra->dim());
  for (const auto& [g, m] : generator_actions) {
    if (g >= algebra->dim() ||
        std::find(algebra->generators().begin(), algebra->generators().end(), g) == algebra->generators().end())
      throw ModuleError("action given for a basis element that is not a generator");
    const auto& b = algebra->element(g);
    if (m.rows() != dims[b.source] || m.cols() != dims[b.target])
      throw ModuleError("action of " + b.label + " must be " + std::to_string(dims[b.source]) + "x" +
                        std::to_string(dims[b.target]));
    gen[g] = m;
  }
  auto gen_matrix = [&](std::size_t g) {
    if (gen[g]) return *gen[g];
    const auto& b = algebra->element(g);
    return Matrix(f, dims[b.source], dims[b.target]);
  };
  std::vector<Matrix> actions(algebra->dim());
  for (std::size_t i = 0; i < algebra->dim(); ++i) {
    const auto& b = algebra->element(i);
    Matrix acc(f, dims[b.source], dims[b.target]);
    if (b.degree == 0) {
      actions[i] = Matrix::identity(f, dims[b.source]);
      continue;
    }
    const auto& words = algebra->generator_words(i);
    if (!words) throw ModuleError("basis element " + b.label + " is not generated by the algebra generators");
    for (const auto& w : *words) {
      Matrix prod = gen_matrix(w.letters.front());
      for (std::size_t k = 1; k < w.letters.size(); ++k) prod = prod * gen_matrix(w.letters[k]);
      acc += w.coefficient * prod;
    }
    actions[i] = std::move(acc);
  }
  return RightModule(std::move(algebra), std::move(dims), std::move(actions), std::move(label));
}

RightModule RightModule::zero(AlgebraPtr algebra) {
  std::vector<std::size_t> dims(algebra->vertex_count(), 0);
  std::vector<Matrix> actions(algebra->dim(), Matrix(algebra->field(), 0, 0));
  return RightModule(std::move(algebra), std::move(dims), std::move(actions), "0");
}

Matrix RightModule::total_action(std::size_t i) const {
  const auto& b = algebra_->element(i);
  Matrix t(field(), total_dim(), total_dim());
  const Matrix& a = actions_[i];
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) t(offsets_[b.source] + r, offsets_[b.target] + c) = a(r, c);
  return t;
}

RightModule RightModule::with_label(std::string label) const {
  RightModule m = *this;
  m.label_ = std::move(label);
  return m;
}

std::string RightModule::fingerprint() const {
  std::ostringstream os;
  os << algebra_->fingerprint() << "#";
  for (auto d : dims_) os << d << ',';
  for (auto g : algebra_->generators()) os << '|' << actions_[g].to_string();
  return os.str();
}

// ---------------------------------------------------------------- maps

Matrix ModuleMap::total(const RightModule& source, const RightModule& target) const {
  Matrix t(source.field(), source.total_dim(), target.total_dim());
  for (std::size_t v = 0; v < blocks.size(); ++v)
    for (std::size_t r = 0; r < blocks[v].rows(); ++r)
      for (std::size_t c = 0; c < blocks[v].cols(); ++c)
        t(source.offset(v) + r, target.offset(v) + c) = blocks[v](r, c);
  return t;
}

bool ModuleMap::is_zero() const {
  return std::all_of(blocks.begin(), blocks.end(), [](const Matrix& m) { return m.is_zero(); });
}

bool is_homomorphism(const RightModule& m, const RightModule& n, const ModuleMap& f) {
  const auto& a = *m.algebra();
  if (f.blocks.size() != a.vertex_count()) return false;
  for (std::size_t v = 0; v < a.vertex_count(); ++v)
    if (f.blocks[v].rows() != m.dim(v) || f.blocks[v].cols() != n.dim(v)) return false;
  for (auto b : a.radical_basis()) {
    const auto& e = a.element(b);
    if (!(m.action(b) * f.blocks[e.target] == f.blocks[e.source] * n.action(b))) return false;
  }
  return true;
}

ModuleMap compose(const ModuleMap& first, const ModuleMap& second) {
  ModuleMap out;
  for (std::size_t v = 0; v < first.blocks.size(); ++v) out.blocks.push_back(first.blocks[v] * second.blocks[v]);
  return out;
}

ModuleMap identity_map(const RightModule& m) {
  ModuleMap out;
  for (auto d : m.dims()) out.blocks.push_back(Matrix::identity(m.field(), d));
  return out;
}

ModuleMap zero_map(const RightModule& m, const RightModule& n) {
  ModuleMap out;
  for (std::size_t v = 0; v < m.dims().size(); ++v) out.blocks.emplace_back(m.field(), m.dim(v), n.dim(v));
  return out;
}

ModuleMap linear_combination(const RightModule& m, const RightModule& n, const std::vector<ModuleMap>& maps,
                             const std::vector<Scalar>& coefficients) {
  ModuleMap out = zero_map(m, n);
  for (std::size_t k = 0; k < maps.size(); ++k) {
    if (coefficients[k].is_zero()) continue;
    for (std::size_t v = 0; v < out.blocks.size(); ++v) out.blocks[v] += coefficients[k] * maps[k].blocks[v];
  }
  return out;
}

// ---------------------------------------------------------------- constructors

RightModule simple_module(const AlgebraPtr& a, std::size_t v) {
  if (v >= a->vertex_count()) throw ModuleError("vertex index out of range");
  std::vector<std::size_t> dims(a->vertex_count(), 0);
  dims[v] = 1;
  return RightModule::from_generators(a, dims, {}, "simple:" + a->vertices()[v]);
}

RightModule projective_module(const AlgebraPtr& a, std::size_t v) {
  if (v >= a->vertex_count()) throw ModuleError("vertex index out of range");
  const FieldSpec f = a->field();
  // Basis of e_v A e_w: basis elements with source v and target w.
  std::vector<std::vector<std::size_t>> at(a->vertex_count());
  std::vector<std::size_t> pos(a->dim(), 0);
  for (std::size_t i = 0; i < a->dim(); ++i)
    if (a->element(i).source == v) {
      auto w = a->element(i).target;
      pos[i] = at[w].size();
      at[w].push_back(i);
    }
  std::vector<std::size_t> dims;
  for (const auto& s : at) dims.push_back(s.size());
  std::vector<Matrix> actions;
  for (std::size_t b = 0; b < a->dim(); ++b) {
    const auto& e = a->element(b);
    Matrix m(f, dims[e.source], dims[e.target]);
    for (std::size_t r = 0; r < at[e.source].size(); ++r)
      for (const auto& [k, c] : a->product(at[e.source][r], b)) m(r, pos[k]) = c;
    actions.push_back(std::move(m));
  }
  return RightModule(a, dims, std::move(actions), "proj:" + a->vertices()[v]);
}

RightModule injective_module(const AlgebraPtr& a, std::size_t v) {
  auto op = opposite_algebra(a).algebra;
  RightModule p = projective_module(op, v);
  std::vector<Matrix> actions;
  for (std::size_t b = 0; b < a->dim(); ++b) actions.push_back(p.action(b).transpose());
  return RightModule(a, p.dims(), std::move(actions), "inj:" + a->vertices()[v]);
}

RightModule thin_module(const AlgebraPtr& a, const std::vector<std::size_t>& support) {
  std::vector<std::size_t> dims(a->vertex_count(), 0);
  std::string label = "thin:";
  std::vector<std::size_t> sorted = support;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (auto v : sorted) {
    if (v >= a->vertex_count()) throw ModuleError("vertex index out of range");
    dims[v] = 1;
    if (label.size() > 5) label += ',';
    label += a->vertices()[v];
  }
  std::vector<std::pair<std::size_t, Matrix>> gens;
  for (auto g : a->generators()) {
    const auto& e = a->element(g);
    if (dims[e.source] && dims[e.target]) gens.emplace_back(g, Matrix::identity(a->field(), 1));
  }
  try {
    return RightModule::from_generators(a, dims, gens, label);
  } catch (const ModuleError& e) {
    throw ModuleError("thin module " + label + " violates the relations: " + e.what());
  }
}

RightModule direct_sum(const AlgebraPtr& a, const std::vector<RightModule>& parts) {
  std::vector<std::size_t> dims(a->vertex_count(), 0);
  for (const auto& p : parts) {
    if (!p.algebra()->same_as(*a)) throw ModuleError("direct summands over different algebras");
    for (std::size_t v = 0; v < dims.size(); ++v) dims[v] += p.dim(v);
  }
  std::vector<Matrix> actions;
  for (std::size_t b = 0; b < a->dim(); ++b) {
    std::vector<Matrix> blocks;
    for (const auto& p : parts) blocks.push_back(p.action(b));
    actions.push_back(Matrix::block_diagonal(a->field(), blocks));
  }
  std::string label;
  for (const auto& p : parts) label += (label.empty() ? "" : " + ") + p.label();
  return RightModule(a, dims, std::move(actions), label);
}

RightModule change_basis(const RightModule& m, const std::vector<Matrix>& g) {
  // New basis rows g_v; new action g_u rho(b) g_v^{-1}.
  const auto& a = m.algebra();
  std::vector<Matrix> inv;
  for (std::size_t v = 0; v < g.size(); ++v) {
    auto sol = solve_right(g[v], Matrix::identity(m.field(), m.dim(v)));
    if (!sol.particular || sol.kernel.dim() != 0) throw ModuleError("change of basis is not invertible");
    inv.push_back(*sol.particular);
  }
  std::vector<Matrix> actions;
  for (std::size_t b = 0; b < a->dim(); ++b) {
    const auto& e = a->element(b);
    actions.push_back(g[e.source] * m.action(b) * inv[e.target]);
  }
  return RightModule(a, m.dims(), std::move(actions), m.label());
}

// ---------------------------------------------------------------- submodules

Submodule submodule_from_bases(const RightModule& m, std::vector<Matrix> bases) {
  const auto& a = m.algebra();
  const FieldSpec f = m.field();
  std::vector<std::size_t> dims;
  for (const auto& b : bases) dims.push_back(b.rows());
  std::vector<Matrix> actions;
  for (std::size_t i = 0; i < a->dim(); ++i) {
    const auto& e = a->element(i);
    Matrix image = bases[e.source] * m.action(i);
    if (image.rows() == 0 || bases[e.target].rows() == 0) {
      if (!image.is_zero()) throw ModuleError("subspaces are not closed under the action");
      actions.emplace_back(f, dims[e.source], dims[e.target]);
      continue;
    }
    auto sol = solve_right(bases[e.target], image);
    if (!sol.particular) throw ModuleError("subspaces are not closed under the action");
    actions.push_back(*sol.particular);
  }
  Submodule s{RightModule(a, dims, std::move(actions)), {}, bases};
  s.inclusion.blocks = std::move(bases);
  return s;
}

Submodule generated_submodule(const RightModule& m, const Matrix& total_vectors) {
  const auto& a = m.algebra();
  const FieldSpec f = m.field();
  // Split each vector into vertex components (submodules are graded) and
  // close under the action of the radical basis.
  std::vector<Subspace> spaces;
  for (std::size_t v = 0; v < a->vertex_count(); ++v) spaces.emplace_back(f, m.dim(v));
  std::vector<std::pair<std::size_t, std::vector<Scalar>>> queue;
  auto add = [&](std::size_t v, std::vector<Scalar> x) {
    if (std::all_of(x.begin(), x.end(), [](const Scalar& s) { return s.is_zero(); })) return;
    if (spaces[v].contains(x)) return;
    Matrix row(f, 0, x.size());
    row.append_row(x);
    spaces[v] = spaces[v].sum(Subspace::span(row));
    queue.emplace_back(v, std::move(x));
  };
  for (std::size_t r = 0; r < total_vectors.rows(); ++r)
    for (std::size_t v = 0; v < a->vertex_count(); ++v) {
      auto row = total_vectors.row(r);
      add(v, {row.begin() + static_cast<long>(m.offset(v)), row.begin() + static_cast<long>(m.offset(v) + m.dim(v))});
    }
  while (!queue.empty()) {
    auto [v, x] = std::move(queue.back());
    queue.pop_back();
    for (auto b : a->radical_basis())
      if (a->element(b).source == v) add(a->element(b).target, mul_row(x, m.action(b)));
  }
  std::vector<Matrix> bases;
  for (auto& s : spaces) bases.push_back(s.basis());
  return submodule_from_bases(m, std::move(bases));
}

Submodule kernel(const RightModule& m, const RightModule&, const ModuleMap& f) {
  std::vector<Matrix> bases;
  for (std::size_t v = 0; v < f.blocks.size(); ++v) bases.push_back(left_kernel(f.blocks[v]).basis());
  for (std::size_t v = 0; v < bases.size(); ++v)
    if (bases[v].cols() != m.dim(v)) bases[v] = Matrix(m.field(), 0, m.dim(v));
  return submodule_from_bases(m, std::move(bases));
}

Submodule image(const RightModule&, const RightModule& n, const ModuleMap& f) {
  std::vector<Matrix> bases;
  for (std::size_t v = 0; v < f.blocks.size(); ++v) {
    Matrix b = Subspace::span(f.blocks[v]).basis();
    if (b.cols() != n.dim(v)) b = Matrix(n.field(), 0, n.dim(v));
    bases.push_back(std::move(b));
  }
  return submodule_from_bases(n, std::move(bases));
}

QuotientModule quotient_module(const RightModule& m, const Submodule& sub) {
  const auto& a = m.algebra();
  const FieldSpec f = m.field();
  std::vector<Quotient> qs;
  std::vector<std::size_t> dims;
  for (std::size_t v = 0; v < a->vertex_count(); ++v) {
    Subspace w = sub.bases[v].rows() ? Subspace::span(sub.bases[v]) : Subspace(f, m.dim(v));
    qs.push_back(quotient_with_section(m.dim(v), w));
    dims.push_back(qs.back().dim);
  }
  std::vector<Matrix> actions;
  for (std::size_t i = 0; i < a->dim(); ++i) {
    const auto& e = a->element(i);
    actions.push_back(qs[e.source].section * m.action(i) * qs[e.target].projection);
  }
  QuotientModule out{RightModule(a, dims, std::move(actions)), {}};
  for (auto& q : qs) out.projection.blocks.push_back(q.projection);
  return out;
}

// ---------------------------------------------------------------- Hom

std::vector<ModuleMap> hom_basis(const RightModule& m, const RightModule& n) {
  if (!m.algebra()->same_as(*n.algebra())) throw ModuleError("Hom between modules over different algebras");
  const auto& a = *m.algebra();
  const FieldSpec f = m.field();
  const std::size_t nv = a.vertex_count();
  // Unknowns: entries of f_v, laid out vertex by vertex, row-major.
  std::vector<std::size_t> uoff{0};
  for (std::size_t v = 0; v < nv; ++v) uoff.push_back(uoff.back() + m.dim(v) * n.dim(v));
  const std::size_t unknowns = uoff.back();
  if (unknowns == 0) return {};
  std::size_t eqs = 0;
  for (auto g : a.generators()) {
    const auto& e = a.element(g);
    eqs += m.dim(e.source) * n.dim(e.target);
  }
  // Row = unknown, column = equation:  rho_M(b) f_v - f_u rho_N(b) = 0.
  Matrix sys(f, unknowns, eqs);
  std::size_t col0 = 0;
  for (auto g : a.generators()) {
    const auto& e = a.element(g);
    const std::size_t u = e.source, v = e.target;
    const Matrix& rm = m.action(g);
    const Matrix& rn = n.action(g);
    const std::size_t rows = m.dim(u), cols = n.dim(v);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) {
        std::size_t col = col0 + r * cols + c;
        // (rho_M f_v)[r][c] = sum_i rho_M[r][i] f_v[i][c]
        for (std::size_t i = 0; i < m.dim(v); ++i)
          if (!rm(r, i).is_zero()) sys(uoff[v] + i * n.dim(v) + c, col) += rm(r, i);
        // (f_u rho_N)[r][c] = sum_j f_u[r][j] rho_N[j][c]
        for (std::size_t j = 0; j < n.dim(u); ++j)
          if (!rn(j, c).is_zero()) sys(uoff[u] + r * n.dim(u) + j, col) -= rn(j, c);
      }
    col0 += rows * cols;
  }
  Subspace sol = eqs ? left_kernel(sys) : Subspace::whole(f, unknowns);
  std::vector<ModuleMap> out;
  for (std::size_t k = 0; k < sol.dim(); ++k) {
    auto row = sol.basis().row(k);
    ModuleMap map;
    for (std::size_t v = 0; v < nv; ++v) {
      Matrix b(f, m.dim(v), n.dim(v));
      for (std::size_t i = 0; i < m.dim(v); ++i)
        for (std::size_t j = 0; j < n.dim(v); ++j) b(i, j) = row[uoff[v] + i * n.dim(v) + j];
      map.blocks.push_back(std::move(b));
    }
    out.push_back(std::move(map));
  }
  return out;
}

std::size_t hom_dim(const RightModule& m, const RightModule& n) { return hom_basis(m, n).size(); }

BrickReport brick_report(const RightModule& m) {
  BrickReport r;
  r.end_dim = hom_dim(m, m);
  r.is_brick = r.end_dim == 1;
  return r;
}

bool is_semibrick(const std::vector<RightModule>& modules) {
  for (std::size_t i = 0; i < modules.size(); ++i) {
    if (!brick_report(modules[i]).is_brick) return false;
    for (std::size_t j = 0; j < modules.size(); ++j)
      if (i != j && hom_dim(modules[i], modules[j]) != 0) return false;
  }
  return true;
}

bool is_isomorphism(const RightModule& m, const RightModule& n, const ModuleMap& f) {
  if (m.dims() != n.dims() || !is_homomorphism(m, n, f)) return false;
  for (std::size_t v = 0; v < f.blocks.size(); ++v)
    if (rank(f.blocks[v]) != m.dim(v)) return false;
  return true;
}

IsoResult iso_test(const RightModule& m, const RightModule& n, std::size_t budget) {
  IsoResult out;
  if (!m.algebra()->same_as(*n.algebra()) || m.dims() != n.dims()) return out;
  if (m.is_zero()) {
    out.map = identity_map(m);
    return out;
  }
  auto basis = hom_basis(m, n);
  if (basis.empty()) return out;
  // Exact necessary conditions: isomorphic modules have equal Hom dimensions.
  const std::size_t end_m = hom_dim(m, m);
  if (basis.size() != end_m || hom_dim(n, n) != end_m || hom_dim(n, m) != end_m) return out;

  const FieldSpec f = m.field();
  const std::size_t k = basis.size();
  auto try_coeffs = [&](const std::vector<Scalar>& c) {
    ModuleMap cand = linear_combination(m, n, basis, c);
    if (is_isomorphism(m, n, cand)) {
      out.map = std::move(cand);
      return true;
    }
    return false;
  };
  if (!f.is_rational()) {
    // Exhaustive when the space is small enough, random otherwise.
    double total = 1.0;
    for (std::size_t i = 0; i < k; ++i) total *= f.prime;
    if (total <= static_cast<double>(budget)) {
      std::vector<long> digits(k, 0);
      while (true) {
        std::size_t i = 0;
        while (i < k && ++digits[i] == static_cast<long>(f.prime)) digits[i++] = 0;
        if (i == k) break;
        std::vector<Scalar> c;
        for (auto d : digits) c.emplace_back(f, d);
        if (try_coeffs(c)) return out;
      }
      return out;  // conclusive: no invertible map exists
    }
    std::mt19937 rng(0x5eed);
    std::uniform_int_distribution<long> dist(0, static_cast<long>(f.prime) - 1);
    for (std::size_t t = 0; t < budget; ++t) {
      std::vector<Scalar> c;
      for (std::size_t i = 0; i < k; ++i) c.emplace_back(f, dist(rng));
      if (try_coeffs(c)) return out;
    }
    out.inconclusive = true;
    return out;
  }
  if (k == 1) {
    try_coeffs({Scalar::one(f)});
    return out;  // conclusive: every nonzero map is a multiple
  }
  std::mt19937 rng(0x5eed);
  std::uniform_int_distribution<long> dist(-1000, 1000);
  for (int t = 0; t < 32; ++t) {
    std::vector<Scalar> c;
    for (std::size_t i = 0; i < k; ++i) c.emplace_back(f, dist(rng));
    if (try_coeffs(c)) return out;
  }
  out.inconclusive = true;
  return out;
}

// ---------------------------------------------------------------- covers

Submodule radical_submodule(const RightModule& m) {
  const auto& a = *m.algebra();
  const FieldSpec f = m.field();
  std::vector<Matrix> rows;
  for (std::size_t v = 0; v < a.vertex_count(); ++v) rows.emplace_back(f, 0, m.dim(v));
  for (auto b : a.radical_basis()) {
    const auto& e = a.element(b);
    rows[e.target] = Matrix::vstack(rows[e.target], m.action(b));
  }
  std::vector<Matrix> bases;
  for (std::size_t v = 0; v < a.vertex_count(); ++v) {
    Matrix basis = Subspace::span(rows[v]).basis();
    if (basis.cols() != m.dim(v)) basis = Matrix(f, 0, m.dim(v));
    bases.push_back(std::move(basis));
  }
  return submodule_from_bases(m, std::move(bases));
}

std::string layer_label(const RightModule& m) {
  if (m.is_zero()) return "0";
  std::vector<std::string> layers;
  RightModule current = m;
  std::vector<std::size_t> before = m.dims();
  while (!current.is_zero()) {
    Submodule rad = radical_submodule(current);
    std::string layer;
    for (std::size_t v = 0; v < current.dims().size(); ++v) {
      std::size_t t = current.dim(v) - rad.module.dim(v);
      for (std::size_t c = 0; c < t; ++c) {
        if (!layer.empty()) layer += ',';
        layer += current.algebra()->vertices()[v];
      }
    }
    layers.push_back(layer);
    if (rad.module.total_dim() == current.total_dim()) break;  // not nilpotent: cannot happen
    current = rad.module;
  }
  std::string out;
  for (const auto& l : layers) out += (out.empty() ? "" : "/") + l;
  return out;
}

TopAndCover top_and_cover(const RightModule& m) {
  const auto& a = m.algebra();
  const FieldSpec f = m.field();
  Submodule rad = radical_submodule(m);
  TopAndCover out;
  std::vector<RightModule> parts;
  // For each summand e_vA of the cover, the element of M_v it is sent to.
  std::vector<std::pair<std::size_t, std::vector<Scalar>>> generators;
  for (std::size_t v = 0; v < a->vertex_count(); ++v) {
    Subspace w = rad.bases[v].rows() ? Subspace::span(rad.bases[v]) : Subspace(f, m.dim(v));
    Quotient q = quotient_with_section(m.dim(v), w);
    out.multiplicities.push_back(q.dim);
    for (std::size_t i = 0; i < q.dim; ++i) {
      parts.push_back(projective_module(a, v));
      generators.emplace_back(v, q.section.row_vector(i));
    }
  }
  out.cover = direct_sum(a, parts);
  out.cover = out.cover.with_label(parts.empty() ? "0" : out.cover.label());
  // e_vA -> M: basis element b (source v, target w) goes to x.b.
  out.cover_map = zero_map(out.cover, m);
  std::vector<std::size_t> filled(a->vertex_count(), 0);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto& [v, x] = generators[p];
    std::vector<std::size_t> local(a->vertex_count(), 0);
    for (std::size_t b = 0; b < a->dim(); ++b) {
      const auto& e = a->element(b);
      if (e.source != v) continue;
      auto img = mul_row(x, m.action(b));
      out.cover_map.blocks[e.target].set_row(filled[e.target] + local[e.target], img);
      ++local[e.target];
    }
    for (std::size_t w = 0; w < a->vertex_count(); ++w) filled[w] += local[w];
  }
  return out;
}

bool is_projective_module(const RightModule& m) {
  // M is projective iff its projective cover is an isomorphism, i.e. the
  // first syzygy vanishes; the cover map is onto, so compare dimensions.
  return top_and_cover(m).cover.total_dim() == m.total_dim();
}

// ---------------------------------------------------------------- resolutions

std::string Resolution::status_string() const {
  switch (status) {
    case ResolutionStatus::FinitePd:
      return "FinitePd(" + std::to_string(pd) + ")";
    case ResolutionStatus::Periodic:
      return "Periodic(" + std::to_string(lead) + "," + std::to_string(period) + ")";
    case ResolutionStatus::TruncatedAt:
      break;
  }
  return "TruncatedAt(" + std::to_string(truncated_at) + ")";
}

Resolution minimal_resolution(const RightModule& m, std::size_t max_steps, std::size_t min_terms) {
  if (max_steps == 0) throw ModuleError("max_steps must be at least 1");
  Resolution res;
  res.complex.resolved = m;
  res.syzygies.push_back(m);
  if (m.is_zero()) {
    res.status = ResolutionStatus::FinitePd;
    res.pd = 0;
    return res;
  }
  bool decided = false;
  ModuleMap previous_inclusion = identity_map(m);  // Omega^k -> P_{k-1} (or M for k = 0)
  for (std::size_t k = 0;; ++k) {
    const bool need_more = k < min_terms;
    if (decided && !need_more) break;
    if (!decided && k >= max_steps && !need_more) {
      res.status = ResolutionStatus::TruncatedAt;
      res.truncated_at = k;
      break;
    }
    const RightModule& omega = res.syzygies[k];
    TopAndCover tc = top_and_cover(omega);
    res.cover_multiplicities.push_back(tc.multiplicities);
    res.complex.terms.push_back(tc.cover);
    res.complex.differentials.push_back(compose(tc.cover_map, previous_inclusion));
    Submodule next = kernel(tc.cover, omega, tc.cover_map);
    previous_inclusion = next.inclusion;
    res.syzygies.push_back(next.module);
    if (next.module.is_zero()) {
      if (!decided) {
        res.status = ResolutionStatus::FinitePd;
        res.pd = k;
      }
      break;
    }
    if (!decided) {
      // Smallest period: compare with the most recent syzygies first.
      for (std::size_t j = k + 1; j-- > 0;) {
        if (res.syzygies[j].dims() != next.module.dims()) continue;
        IsoResult iso = iso_test(res.syzygies[j], next.module);
        if (iso.inconclusive) res.iso_inconclusive = true;
        if (iso) {
          res.status = ResolutionStatus::Periodic;
          res.lead = j;
          res.period = k + 1 - j;
          decided = true;
          break;
        }
      }
    }
  }
  return res;
}

ProjectiveComplex pad_complex(const ProjectiveComplex& c, std::size_t k, const RightModule& x) {
  if (k == 0 || k >= c.terms.size()) throw ModuleError("padding position out of range");
  const auto& a = x.algebra();
  ProjectiveComplex out = c;
  // P'_k = P_k + X, P'_{k-1} = P_{k-1} + X.
  out.terms[k] = direct_sum(a, {c.terms[k], x});
  out.terms[k - 1] = direct_sum(a, {c.terms[k - 1], x});
  auto widen = [&](const ModuleMap& f, const RightModule& src, const RightModule& src_new, const RightModule& dst,
                   const RightModule& dst_new, bool src_padded, bool dst_padded) {
    ModuleMap g = zero_map(src_new, dst_new);
    for (std::size_t v = 0; v < g.blocks.size(); ++v) {
      for (std::size_t r = 0; r < src.dim(v); ++r)
        for (std::size_t col = 0; col < dst.dim(v); ++col) g.blocks[v](r, col) = f.blocks[v](r, col);
      if (src_padded && dst_padded)
        for (std::size_t i = 0; i < x.dim(v); ++i) g.blocks[v](src.dim(v) + i, dst.dim(v) + i) = Scalar::one(x.field());
    }
    return g;
  };
  // d_k: P_k + X -> P_{k-1} + X is d_k + id.
  out.differentials[k] = widen(c.differentials[k], c.terms[k], out.terms[k], c.terms[k - 1], out.terms[k - 1], true, true);
  // d_{k-1} (or the augmentation): P_{k-1} + X -> P_{k-2}, zero on X.
  const RightModule& below = k - 1 == 0 ? c.resolved : c.terms[k - 2];
  out.differentials[k - 1] = widen(c.differentials[k - 1], c.terms[k - 1], out.terms[k - 1], below, below, true, false);
  // d_{k+1}: P_{k+1} -> P_k + X, zero into X.
  if (k + 1 < c.terms.size())
    out.differentials[k + 1] =
        widen(c.differentials[k + 1], c.terms[k + 1], c.terms[k + 1], c.terms[k], out.terms[k], false, true);
  return out;
}

namespace {

// Flatten a module map into one row vector (vertex blocks, row-major).
std::vector<Scalar> flatten(const ModuleMap& f, FieldSpec field) {
  std::vector<Scalar> out;
  for (const auto& b : f.blocks)
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (std::size_t c = 0; c < b.cols(); ++c) out.push_back(b(r, c));
  (void)field;
  return out;
}

// Rank of Hom(P, N) -> Hom(P', N), g -> d o g, for d: P' -> P.
std::size_t precompose_rank(const std::vector<ModuleMap>& hom_p, const ModuleMap& d, const RightModule& p_prime,
                            const RightModule& n) {
  if (hom_p.empty()) return 0;
  std::size_t width = 0;
  for (std::size_t v = 0; v < n.dims().size(); ++v) width += p_prime.dim(v) * n.dim(v);
  Matrix rows(n.field(), 0, width);
  for (const auto& g : hom_p) rows.append_row(flatten(compose(d, g), n.field()));
  return rank(rows);
}

}  // namespace

std::vector<std::size_t> ext_dims_from_complex(const ProjectiveComplex& c, const RightModule& n, std::size_t n_max) {
  std::vector<std::size_t> dims;
  std::vector<std::vector<ModuleMap>> homs;
  auto hom_at = [&](std::size_t k) -> const std::vector<ModuleMap>& {
    while (homs.size() <= k) homs.push_back(hom_basis(c.terms[homs.size()], n));
    return homs[k];
  };
  // rank of delta_k : Hom(P_k, N) -> Hom(P_{k+1}, N)
  auto delta_rank = [&](std::size_t k) -> std::size_t {
    if (k + 1 >= c.terms.size()) return 0;  // terms beyond the complex are zero
    return precompose_rank(hom_at(k), c.differentials[k + 1], c.terms[k + 1], n);
  };
  std::size_t prev_rank = 0;
  for (std::size_t k = 0; k <= n_max; ++k) {
    if (k >= c.terms.size()) {
      dims.push_back(0);
      prev_rank = 0;
      continue;
    }
    std::size_t h = hom_at(k).size();
    std::size_t r = delta_rank(k);
    dims.push_back(h - r - prev_rank);
    prev_rank = r;
  }
  return dims;
}

std::string ExtResult::certainty_string() const {
  switch (certainty) {
    case ExtCertainty::AllHigherVanish:
      return "AllHigherVanish(pd=" + std::to_string(pd) + ")";
    case ExtCertainty::EventuallyPeriodic:
      return "EventuallyPeriodic(" + std::to_string(lead) + "," + std::to_string(period) + ")";
    case ExtCertainty::ExactUpTo:
      break;
  }
  return "ExactUpTo(" + std::to_string(dims.empty() ? 0 : dims.size() - 1) + ")";
}

ExtResult ext_dims(const Resolution& res, const RightModule& n, std::size_t n_max) {
  ExtResult out;
  // Degrees needed to certify all n >= 1.
  std::size_t needed = n_max;
  if (res.status == ResolutionStatus::Periodic) needed = std::max(needed, res.lead + res.period);
  if (res.status == ResolutionStatus::FinitePd) needed = std::max(needed, res.pd);
  // Ext^k needs terms P_0..P_{k+1}; a finite resolution already has them all.
  const Resolution* use = &res;
  Resolution longer;
  if (res.status != ResolutionStatus::FinitePd && res.complex.terms.size() < needed + 2) {
    longer = minimal_resolution(res.complex.resolved, std::max<std::size_t>(res.complex.terms.size(), 1), needed + 2);
    use = &longer;
  }
  auto all = ext_dims_from_complex(use->complex, n, needed);
  out.dims.assign(all.begin(), all.begin() + static_cast<long>(n_max + 1));
  for (std::size_t k = 1; k < all.size(); ++k)
    if (all[k] != 0) {
      out.first_nonzero = k;
      break;
    }
  switch (res.status) {
    case ResolutionStatus::FinitePd:
      out.certainty = ExtCertainty::AllHigherVanish;
      out.pd = res.pd;
      out.higher_vanish_certified = out.first_nonzero == 0;
      break;
    case ResolutionStatus::Periodic:
      out.certainty = ExtCertainty::EventuallyPeriodic;
      out.lead = res.lead;
      out.period = res.period;
      out.higher_vanish_certified = out.first_nonzero == 0;
      break;
    case ResolutionStatus::TruncatedAt:
      out.certainty = ExtCertainty::ExactUpTo;
      break;
  }
  return out;
}

ExtResult ext_dims(const RightModule& m, const RightModule& n, std::size_t n_max, std::size_t max_steps) {
  return ext_dims(minimal_resolution(m, max_steps), n, n_max);
}

// ---------------------------------------------------------------- files

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::size_t vertex_or_throw(const AlgebraPtr& a, const std::string& label) {
  auto v = a->vertex_index(label);
  if (!v) throw ModuleError("unknown vertex '" + label + "' in algebra " + a->name());
  return *v;
}

// Parse "[[1, 2], [3, 4]]" or "[]".
Matrix parse_matrix_literal(FieldSpec f, const std::string& text, std::size_t line) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto fail = [&](const std::string& what) {
    throw ParseError(line, 1, "malformed matrix literal: " + what);
  };
  if (s == "[]") return Matrix(f, 0, 0);
  if (s.size() < 4 || s.front() != '[' || s.back() != ']') fail("expected [[...]]");
  std::string inner = s.substr(1, s.size() - 2);
  std::vector<std::vector<Scalar>> rows;
  std::size_t i = 0;
  while (i < inner.size()) {
    if (inner[i] != '[') fail("expected '['");
    auto close = inner.find(']', i);
    if (close == std::string::npos) fail("unterminated row");
    std::vector<Scalar> row;
    std::string body = inner.substr(i + 1, close - i - 1);
    if (!body.empty())
      for (const auto& tok : split(body, ',')) {
        try {
          row.emplace_back(f, parse_rational(tok));
        } catch (const LinalgError& e) {
          fail(e.what());
        }
      }
    rows.push_back(std::move(row));
    i = close + 1;
    if (i < inner.size()) {
      if (inner[i] != ',') fail("expected ',' between rows");
      ++i;
    }
  }
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) fail("ragged rows");
  return Matrix::from_rows(f, cols, rows);
}

}  // namespace

RightModule parse_module_file(const AlgebraPtr& a, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  std::string name;
  std::optional<std::vector<std::size_t>> dims;
  std::vector<std::pair<std::size_t, Matrix>> maps;
  std::vector<std::size_t> map_lines;
  bool header = false, ended = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (ended) throw ParseError(lineno, 1, "content after 'end'");
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (!header && kw != "module") throw ParseError(lineno, 1, "file must start with 'module <name> over <algebra>'");
    if (kw == "module") {
      if (header) throw ParseError(lineno, 1, "duplicate 'module' line");
      std::string over, alg;
      ls >> name >> over >> alg;
      if (name.empty() || over != "over" || alg.empty())
        throw ParseError(lineno, 1, "expected 'module <name> over <algebra>'");
      if (alg != a->name())
        throw ParseError(lineno, line.find(alg) + 1,
                         "module is over '" + alg + "' but the algebra is '" + a->name() + "'");
      header = true;
    } else if (kw == "dim") {
      std::vector<std::size_t> d;
      std::string tok;
      while (ls >> tok) {
        if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
          throw ParseError(lineno, line.find(tok) + 1, "dimension must be a nonnegative integer");
        d.push_back(std::stoul(tok));
      }
      if (d.size() != a->vertex_count())
        throw ParseError(lineno, 1, "expected " + std::to_string(a->vertex_count()) + " dimensions");
      dims = std::move(d);
    } else if (kw == "map") {
      std::string arrow;
      ls >> arrow;
      auto idx = a->find_label(arrow);
      if (!idx || std::find(a->generators().begin(), a->generators().end(), *idx) == a->generators().end())
        throw ParseError(lineno, line.find(arrow) + 1, "unknown arrow '" + arrow + "'");
      std::string rest;
      std::getline(ls, rest);
      maps.emplace_back(*idx, parse_matrix_literal(a->field(), rest, lineno));
      map_lines.push_back(lineno);
    } else if (kw == "end") {
      ended = true;
    } else {
      throw ParseError(lineno, 1, "unknown directive '" + kw + "'");
    }
  }
  if (!header) throw ParseError(std::max<std::size_t>(lineno, 1), 1, "missing 'module' line");
  if (!dims) throw ParseError(std::max<std::size_t>(lineno, 1), 1, "missing 'dim' line");
  for (std::size_t k = 0; k < maps.size(); ++k) {
    auto& [g, m] = maps[k];
    const auto& e = a->element(g);
    std::size_t r = (*dims)[e.source], c = (*dims)[e.target];
    if (m.rows() == 0 && m.cols() == 0 && r * c == 0) m = Matrix(a->field(), r, c);
    if (m.rows() == r && m.cols() == 0 && c == 0) m = Matrix(a->field(), r, c);
    if (m.rows() != r || m.cols() != c)
      throw ParseError(map_lines[k], 1,
                       "map " + e.label + " must be " + std::to_string(r) + "x" + std::to_string(c));
  }
  return RightModule::from_generators(a, *dims, maps, name);
}

std::string format_module(const RightModule& m, const std::string& name) {
  const auto& a = *m.algebra();
  std::ostringstream os;
  std::string n = name.empty() ? (m.label().empty() ? "M" : m.label()) : name;
  for (auto& c : n)
    if (std::isspace(static_cast<unsigned char>(c))) c = '_';
  os << "module " << n << " over " << a.name() << '\n';
  os << "dim";
  for (auto d : m.dims()) os << ' ' << d;
  os << '\n';
  for (auto g : a.generators()) {
    const Matrix& mat = m.action(g);
    if (mat.empty() || mat.is_zero()) continue;
    os << "map " << a.element(g).label << ' ' << mat.to_string() << '\n';
  }
  os << "end\n";
  return os.str();
}

std::optional<RightModule> named_module(const AlgebraPtr& a, std::string_view spec) {
  auto colon = spec.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  std::string kind(spec.substr(0, colon));
  std::string arg(spec.substr(colon + 1));
  if (kind == "simple") return simple_module(a, vertex_or_throw(a, arg));
  if (kind == "proj") return projective_module(a, vertex_or_throw(a, arg));
  if (kind == "inj") return injective_module(a, vertex_or_throw(a, arg));
  if (kind == "thin") {
    std::vector<std::size_t> support;
    for (const auto& tok : split(arg, ',')) support.push_back(vertex_or_throw(a, trim(tok)));
    return thin_module(a, support);
  }
  return std::nullopt;
}

RightModule lift_to(const AlgebraPtr& target, const RightModule& m) {
  if (target->dim() != m.algebra()->dim() || target->vertex_count() != m.algebra()->vertex_count())
    throw ModuleError("lift target has a different basis");
  std::vector<std::pair<std::size_t, Matrix>> gens;
  for (auto g : target->generators()) {
    const Matrix& src = m.action(g);
    Matrix dst(target->field(), src.rows(), src.cols());
    for (std::size_t r = 0; r < src.rows(); ++r)
      for (std::size_t c = 0; c < src.cols(); ++c) dst(r, c) = Scalar(target->field(), src(r, c).value());
    gens.emplace_back(g, std::move(dst));
  }
  return RightModule::from_generators(target, m.dims(), gens, m.label());
}

}  // namespace exrep
