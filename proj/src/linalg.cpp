#include "exrep/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace exrep {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FieldSpec FieldSpec::prime_field(std::uint32_t p) {
  if (!is_prime(p)) throw LinalgError("field characteristic " + std::to_string(p) + " is not prime");
  return {p};
}

std::string FieldSpec::name() const {
  return prime == 0 ? "Q" : "F" + std::to_string(prime);
}

FieldSpec FieldSpec::parse(const std::string& text) {
  if (text == "Q") return rationals();
  std::string digits = text;
  if (!digits.empty() && digits[0] == 'F') digits.erase(0, 1);
  while (!digits.empty() && digits[0] == ' ') digits.erase(0, 1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
    throw LinalgError("unknown field '" + text + "' (expected Q or F<p>)");
  return prime_field(static_cast<std::uint32_t>(std::stoul(digits)));
}

mpq_class parse_rational(const std::string& text) {
  mpq_class q;
  auto slash = text.find('/');
  auto valid_int = [](const std::string& s, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  std::string num = text.substr(0, slash);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num, true)) throw LinalgError("malformed rational literal '" + text + "'");
  mpz_class n(num), d(1);
  if (slash != std::string::npos) {
    std::string den = text.substr(slash + 1);
    if (!valid_int(den, false)) throw LinalgError("malformed rational literal '" + text + "'");
    d = mpz_class(den);
    if (d == 0) throw LinalgError("zero denominator in '" + text + "'");
  }
  q = mpq_class(n, d);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------- Scalar

Scalar::Scalar(FieldSpec field, long value) : value_(value), prime_(field.prime) { reduce(); }

Scalar::Scalar(FieldSpec field, const mpq_class& value) : value_(value), prime_(field.prime) {
  value_.canonicalize();
  reduce();
}

void Scalar::reduce() {
  if (prime_ == 0) return;
  mpz_class p(prime_);
  mpz_class num = value_.get_num();
  mpz_class den = value_.get_den();
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
  if (den != 1) {
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0)
      throw LinalgError("denominator divisible by field characteristic " + std::to_string(prime_));
    r = r * inv;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t());
  }
  value_ = mpq_class(r);
}

void Scalar::check_same(const Scalar& o) const {
  if (prime_ != o.prime_) throw LinalgError("arithmetic between different fields");
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.value_ = -r.value_;
  r.reduce();
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  check_same(o);
  value_ += o.value_;
  reduce();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  check_same(o);
  value_ -= o.value_;
  reduce();
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  check_same(o);
  value_ *= o.value_;
  reduce();
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw LinalgError("division by zero");
  Scalar r = *this;
  r.value_ = 1 / r.value_;
  r.reduce();
  return r;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  check_same(o);
  return *this *= o.inverse();
}

std::string Scalar::to_string() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(FieldSpec field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(field)) {}

Matrix Matrix::identity(FieldSpec field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(field);
  return m;
}

Matrix Matrix::from_rows(FieldSpec field, std::size_t cols,
                         const std::vector<std::vector<Scalar>>& rows) {
  Matrix m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw LinalgError("ragged matrix rows");
    m.set_row(r, rows[r]);
  }
  return m;
}

Matrix Matrix::from_ints(FieldSpec field, const std::vector<std::vector<long>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw LinalgError("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = Scalar(field, rows[r][c]);
  }
  return m;
}

std::vector<Scalar> Matrix::row_vector(std::size_t r) const {
  auto s = row(r);
  return {s.begin(), s.end()};
}

void Matrix::set_row(std::size_t r, std::span<const Scalar> values) {
  if (values.size() != cols_) throw LinalgError("row length mismatch");
  std::copy(values.begin(), values.end(), data_.begin() + static_cast<std::ptrdiff_t>(r * cols_));
}

void Matrix::append_row(std::span<const Scalar> values) {
  if (values.size() != cols_) throw LinalgError("row length mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
}

Matrix Matrix::transpose() const {
  Matrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const {
  Matrix m(field_, idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i) m.set_row(i, row(idx[i]));
  return m;
}

Matrix Matrix::select_cols(const std::vector<std::size_t>& idx) const {
  Matrix m(field_, rows_, idx.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t i = 0; i < idx.size(); ++i) m(r, i) = (*this)(r, idx[i]);
  return m;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  Matrix m(field_, nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) m(r, c) = (*this)(r0 + r, c0 + c);
  return m;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.cols_) throw LinalgError("vstack column mismatch");
  Matrix m = a;
  m.data_.insert(m.data_.end(), b.data_.begin(), b.data_.end());
  m.rows_ += b.rows_;
  return m;
}

Matrix Matrix::block_diagonal(FieldSpec field, const std::vector<Matrix>& blocks) {
  std::size_t nr = 0, nc = 0;
  for (const auto& b : blocks) {
    nr += b.rows();
    nc += b.cols();
  }
  Matrix m(field, nr, nc);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (std::size_t c = 0; c < b.cols(); ++c) m(r0 + r, c0 + c) = b(r, c);
    r0 += b.rows();
    c0 += b.cols();
  }
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw LinalgError("matrix sum shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw LinalgError("matrix difference shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_)
    throw LinalgError("matrix product shape mismatch: " + std::to_string(a.rows_) + "x" +
                      std::to_string(a.cols_) + " * " + std::to_string(b.rows_) + "x" +
                      std::to_string(b.cols_));
  Matrix m(a.field_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (!b(k, j).is_zero()) m(i, j) += x * b(k, j);
    }
  return m;
}

Matrix operator*(const Scalar& s, const Matrix& m) {
  Matrix r = m;
  for (auto& x : r.data_) x *= s;
  return r;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string Matrix::to_string() const {
  if (rows_ == 0) return "[]";
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    if (r) os << ", ";
    os << '[';
    for (std::size_t c = 0; c < cols_; ++c) {
      if (c) os << ", ";
      os << (*this)(r, c).to_string();
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

std::vector<Scalar> mul_row(std::span<const Scalar> v, const Matrix& m) {
  if (v.size() != m.rows()) throw LinalgError("vector-matrix shape mismatch");
  std::vector<Scalar> out(m.cols(), Scalar::zero(m.field()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].is_zero()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(k, j).is_zero()) out[j] += v[k] * m(k, j);
  }
  return out;
}

// ---------------------------------------------------------------- echelon

Echelon row_echelon(const Matrix& m) {
  Matrix a = m;
  const std::size_t nr = a.rows(), nc = a.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < nc && r < nr; ++c) {
    std::size_t sel = r;
    while (sel < nr && a(sel, c).is_zero()) ++sel;
    if (sel == nr) continue;
    if (sel != r)
      for (std::size_t j = 0; j < nc; ++j) std::swap(a(sel, j), a(r, j));
    Scalar inv = a(r, c).inverse();
    for (std::size_t j = c; j < nc; ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < nr; ++i) {
      if (i == r || a(i, c).is_zero()) continue;
      Scalar f = a(i, c);
      for (std::size_t j = c; j < nc; ++j)
        if (!a(r, j).is_zero()) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<std::size_t> keep(r);
  for (std::size_t i = 0; i < r; ++i) keep[i] = i;
  return {a.select_rows(keep), std::move(pivots)};
}

// ---------------------------------------------------------------- Subspace

Subspace::Subspace(FieldSpec field, std::size_t ambient_dim)
    : ambient_(ambient_dim), basis_(field, 0, ambient_dim) {}

Subspace Subspace::span(const Matrix& rows) {
  Subspace s(rows.field(), rows.cols());
  auto e = row_echelon(rows);
  s.basis_ = std::move(e.reduced);
  s.pivots_ = std::move(e.pivots);
  return s;
}

Subspace Subspace::whole(FieldSpec field, std::size_t n) {
  return span(Matrix::identity(field, n));
}

std::optional<std::vector<Scalar>> Subspace::coordinates(std::span<const Scalar> v) const {
  if (v.size() != ambient_) throw LinalgError("vector not in ambient space");
  std::vector<Scalar> coords;
  coords.reserve(dim());
  std::vector<Scalar> rest(v.begin(), v.end());
  for (std::size_t i = 0; i < dim(); ++i) {
    Scalar c = rest[pivots_[i]];
    coords.push_back(c);
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j < ambient_; ++j)
      if (!basis_(i, j).is_zero()) rest[j] -= c * basis_(i, j);
  }
  for (const auto& x : rest)
    if (!x.is_zero()) return std::nullopt;
  return coords;
}

bool Subspace::contains(std::span<const Scalar> v) const { return coordinates(v).has_value(); }

bool Subspace::contains(const Subspace& other) const {
  for (std::size_t i = 0; i < other.dim(); ++i)
    if (!contains(other.basis().row(i))) return false;
  return true;
}

Subspace Subspace::sum(const Subspace& other) const {
  return span(Matrix::vstack(basis_, other.basis_));
}

// ---------------------------------------------------------------- kernels

Subspace left_kernel(const Matrix& m) {
  const FieldSpec f = m.field();
  auto e = row_echelon(m.transpose());
  const std::size_t n = m.rows();
  std::vector<bool> is_pivot(n, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  Matrix k(f, 0, n);
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Scalar> v(n, Scalar::zero(f));
    v[free] = Scalar::one(f);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.reduced(i, free);
    k.append_row(v);
  }
  return Subspace::span(k);
}

std::size_t rank(const Matrix& m) { return row_echelon(m).rank(); }

RankKernelImage rank_kernel_image(const Matrix& m) {
  RankKernelImage out;
  out.image = Subspace::span(m);
  out.rank = out.image.dim();
  out.kernel = left_kernel(m);
  return out;
}

SolveResult solve_right(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols())
    throw LinalgError("solve_right: column mismatch (" + std::to_string(a.cols()) + " vs " +
                      std::to_string(b.cols()) + ")");
  const FieldSpec f = a.field();
  const std::size_t r = a.rows(), s = b.rows(), c = a.cols();
  Matrix aug(f, c, r + s);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = 0; j < r; ++j) aug(i, j) = a(j, i);
    for (std::size_t j = 0; j < s; ++j) aug(i, r + j) = b(j, i);
  }
  auto e = row_echelon(aug);
  SolveResult out;
  out.kernel = left_kernel(a);
  for (auto p : e.pivots)
    if (p >= r) return out;
  Matrix x(f, s, r);
  for (std::size_t i = 0; i < e.pivots.size(); ++i)
    for (std::size_t k = 0; k < s; ++k) x(k, e.pivots[i]) = e.reduced(i, r + k);
  out.particular = std::move(x);
  return out;
}

// ---------------------------------------------------------------- quotients

Quotient quotient_with_section(std::size_t ambient_dim, const Subspace& w) {
  if (w.ambient_dim() != ambient_dim) throw LinalgError("subspace not in ambient space");
  const FieldSpec f = w.field();
  std::vector<bool> is_pivot(ambient_dim, false);
  for (auto p : w.pivots()) is_pivot[p] = true;
  Quotient q;
  for (std::size_t j = 0; j < ambient_dim; ++j)
    if (!is_pivot[j]) q.kept.push_back(j);
  q.dim = q.kept.size();
  q.projection = Matrix(f, ambient_dim, q.dim);
  q.section = Matrix(f, q.dim, ambient_dim);
  for (std::size_t i = 0; i < q.dim; ++i) {
    q.projection(q.kept[i], i) = Scalar::one(f);
    q.section(i, q.kept[i]) = Scalar::one(f);
  }
  for (std::size_t r = 0; r < w.dim(); ++r)
    for (std::size_t i = 0; i < q.dim; ++i) q.projection(w.pivots()[r], i) = -w.basis()(r, q.kept[i]);
  return q;
}

Quotient quotient_with_complement(std::size_t ambient_dim, const Subspace& w,
                                  const std::vector<std::size_t>& complement) {
  if (w.ambient_dim() != ambient_dim) throw LinalgError("subspace not in ambient space");
  const FieldSpec f = w.field();
  if (complement.size() + w.dim() != ambient_dim)
    throw LinalgError("complement has wrong dimension");
  Matrix units(f, complement.size(), ambient_dim);
  for (std::size_t i = 0; i < complement.size(); ++i) units(i, complement[i]) = Scalar::one(f);
  Matrix full = Matrix::vstack(units, w.basis());
  auto sol = solve_right(full, Matrix::identity(f, ambient_dim));
  if (!sol.particular || sol.kernel.dim() != 0)
    throw LinalgError("chosen coordinates do not complement the subspace");
  Quotient q;
  q.kept = complement;
  q.dim = complement.size();
  std::vector<std::size_t> first(q.dim);
  for (std::size_t i = 0; i < q.dim; ++i) first[i] = i;
  q.projection = sol.particular->select_cols(first);
  q.section = units;
  return q;
}

Quotient quotient_prefer_low(std::size_t ambient_dim, const Subspace& w) {
  std::vector<std::size_t> rev(ambient_dim);
  for (std::size_t j = 0; j < ambient_dim; ++j) rev[j] = ambient_dim - 1 - j;
  auto e = row_echelon(w.basis().select_cols(rev));
  std::vector<bool> is_pivot(ambient_dim, false);
  for (auto p : e.pivots) is_pivot[ambient_dim - 1 - p] = true;
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < ambient_dim; ++j)
    if (!is_pivot[j]) kept.push_back(j);
  return quotient_with_complement(ambient_dim, w, kept);
}

}  // namespace exrep
