#pragma once

// Exact dense linear algebra over Q and prime fields.
//
// Vectors are rows and linear maps act on the right: v -> v * M.  A matrix
// with r rows and c columns therefore represents a map K^r -> K^c.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace exrep {

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ground field: the rationals (prime == 0) or F_p.
struct FieldSpec {
  std::uint32_t prime = 0;

  static FieldSpec rationals() { return {}; }
  static FieldSpec prime_field(std::uint32_t p);

  bool is_rational() const { return prime == 0; }
  std::string name() const;  // "Q" or "F<p>"
  static FieldSpec parse(const std::string& text);

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

bool is_prime(std::uint64_t n);

/// Field element.  Residues mod p are stored as integers in [0, p).
class Scalar {
 public:
  Scalar() = default;
  Scalar(FieldSpec field, long value);
  Scalar(FieldSpec field, const mpq_class& value);

  static Scalar zero(FieldSpec f) { return Scalar(f, 0L); }
  static Scalar one(FieldSpec f) { return Scalar(f, 1L); }

  FieldSpec field() const { return {prime_}; }
  const mpq_class& value() const { return value_; }
  bool is_zero() const { return sgn(value_) == 0; }
  bool is_one() const { return value_ == 1; }

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  Scalar inverse() const;

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.prime_ == b.prime_ && a.value_ == b.value_;
  }
  friend bool operator<(const Scalar& a, const Scalar& b) { return a.value_ < b.value_; }

  /// "a" or "a/b" with b > 0 in lowest terms.
  std::string to_string() const;

 private:
  void reduce();
  void check_same(const Scalar& o) const;

  mpq_class value_;
  std::uint32_t prime_ = 0;
};

/// Parse a rational literal "a" or "a/b".
mpq_class parse_rational(const std::string& text);

class Matrix {
 public:
  Matrix() = default;
  Matrix(FieldSpec field, std::size_t rows, std::size_t cols);

  static Matrix identity(FieldSpec field, std::size_t n);
  static Matrix from_rows(FieldSpec field, std::size_t cols,
                          const std::vector<std::vector<Scalar>>& rows);
  static Matrix from_ints(FieldSpec field, const std::vector<std::vector<long>>& rows);

  FieldSpec field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Scalar> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<Scalar> row_vector(std::size_t r) const;
  void set_row(std::size_t r, std::span<const Scalar> values);
  void append_row(std::span<const Scalar> values);

  bool is_zero() const;
  Matrix transpose() const;
  Matrix select_rows(const std::vector<std::size_t>& idx) const;
  Matrix select_cols(const std::vector<std::size_t>& idx) const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

  /// Stack rows of a on top of b (same column count).
  static Matrix vstack(const Matrix& a, const Matrix& b);
  /// Place blocks along the diagonal.
  static Matrix block_diagonal(FieldSpec field, const std::vector<Matrix>& blocks);

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Scalar& s, const Matrix& m);
  friend bool operator==(const Matrix& a, const Matrix& b);

  /// Matrix literal "[[1, 2], [0, 1/2]]"; empty matrices render as "[]".
  std::string to_string() const;

 private:
  FieldSpec field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

std::vector<Scalar> mul_row(std::span<const Scalar> v, const Matrix& m);

/// Reduced row echelon form of the row space.
struct Echelon {
  Matrix reduced;                   // nonzero rows only
  std::vector<std::size_t> pivots;  // pivot column of each row, strictly increasing
  std::size_t rank() const { return pivots.size(); }
};

Echelon row_echelon(const Matrix& m);

/// Subspace of K^n stored by its canonical reduced-echelon basis.
class Subspace {
 public:
  Subspace() = default;
  Subspace(FieldSpec field, std::size_t ambient_dim);  // zero subspace

  static Subspace span(const Matrix& rows);
  static Subspace whole(FieldSpec field, std::size_t n);

  FieldSpec field() const { return basis_.field(); }
  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool contains(std::span<const Scalar> v) const;
  bool contains(const Subspace& other) const;
  /// Coordinates of v in the echelon basis; nullopt if v is not in the span.
  std::optional<std::vector<Scalar>> coordinates(std::span<const Scalar> v) const;

  Subspace sum(const Subspace& other) const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  std::size_t ambient_ = 0;
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

struct RankKernelImage {
  std::size_t rank = 0;
  Subspace kernel;  // {x : x * m = 0}
  Subspace image;   // row space of m
};

RankKernelImage rank_kernel_image(const Matrix& m);
std::size_t rank(const Matrix& m);
Subspace left_kernel(const Matrix& m);

struct SolveResult {
  std::optional<Matrix> particular;  // x with x * a = b
  Subspace kernel;                   // {y : y * a = 0}
};

/// Solve x * a = b.  Throws LinalgError on incompatible shapes.
SolveResult solve_right(const Matrix& a, const Matrix& b);

/// Quotient K^n / W together with a linear section.
///   projection: n x q, kernel(projection) = W
///   section:    q x n, section * projection = identity
/// The section sends the quotient basis to standard unit vectors.
struct Quotient {
  Matrix projection;
  Matrix section;
  std::size_t dim = 0;
  std::vector<std::size_t> kept;  // coordinates used by the section
};

Quotient quotient_with_section(std::size_t ambient_dim, const Subspace& w);

/// Same, but the section uses the given coordinates, which must index a
/// complement of W.  Throws LinalgError otherwise.
Quotient quotient_with_complement(std::size_t ambient_dim, const Subspace& w,
                                  const std::vector<std::size_t>& complement);

/// Quotient whose section prefers the lowest-numbered coordinates, i.e. W is
/// echelonized with pivots on the highest coordinates.
Quotient quotient_prefer_low(std::size_t ambient_dim, const Subspace& w);

}  // namespace exrep
