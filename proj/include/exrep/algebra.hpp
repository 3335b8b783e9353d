#pragma once

// Quiver presentations and finite-dimensional structure-constant algebras.
//
// Paths compose left to right: "alpha*beta" is alpha followed by beta, so
// it is nonzero only when target(alpha) == source(beta).

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "exrep/linalg.hpp"

namespace exrep {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Arrow {
  std::string name;
  std::size_t source = 0;
  std::size_t target = 0;
};

class Quiver {
 public:
  std::size_t add_vertex(const std::string& label);
  std::size_t add_arrow(const std::string& name, std::size_t source, std::size_t target);

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  std::optional<std::size_t> vertex_index(std::string_view label) const;
  std::optional<std::size_t> arrow_index(std::string_view name) const;

 private:
  std::vector<std::string> vertices_;
  std::vector<Arrow> arrows_;
};

struct PathTerm {
  mpq_class coefficient;
  std::vector<std::size_t> arrows;  // indices into Quiver::arrows(), in path order
};

struct RelationExpr {
  std::vector<PathTerm> terms;
  std::size_t line = 0;
};

struct Presentation {
  std::string name;
  FieldSpec field;
  Quiver quiver;
  std::vector<RelationExpr> relations;
};

Presentation parse_algebra_file(std::string_view text);

struct BasisElement {
  std::size_t source = 0;
  std::size_t target = 0;
  unsigned degree = 0;
  std::string label;
  std::vector<std::size_t> path;  // normal-form arrow word of the originating quiver
};

using SparseVector = std::vector<std::pair<std::size_t, Scalar>>;

/// A word in the radical generators with a coefficient.
struct GeneratorWord {
  Scalar coefficient;
  std::vector<std::size_t> letters;  // basis indices of generators
};

/// Basic algebra given by structure constants in a Peirce-graded basis.
/// Degree-0 basis elements are the vertex idempotents; elements of degree
/// >= 1 span the radical.
class Algebra {
 public:
  Algebra(std::string name, FieldSpec field, std::vector<std::string> vertices,
          std::vector<BasisElement> basis, std::vector<SparseVector> table);

  const std::string& name() const { return name_; }
  FieldSpec field() const { return field_; }
  const std::vector<std::string>& vertices() const { return vertices_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<BasisElement>& basis() const { return basis_; }
  const BasisElement& element(std::size_t i) const { return basis_[i]; }

  /// Basis index of e_v, if the table has one.
  std::optional<std::size_t> idempotent(std::size_t vertex) const { return idempotents_[vertex]; }
  bool is_idempotent(std::size_t i) const { return basis_[i].degree == 0; }
  const std::vector<std::size_t>& radical_basis() const { return radical_; }

  const SparseVector& product(std::size_t i, std::size_t j) const { return table_[i * dim() + j]; }
  std::vector<Scalar> multiply(std::span<const Scalar> x, std::span<const Scalar> y) const;
  std::vector<Scalar> unit_vector(std::size_t i) const;

  /// Radical basis elements spanning a complement of rad^2 in rad.
  const std::vector<std::size_t>& generators() const { return generators_; }
  /// Expression of a radical basis element in the generators; empty
  /// optional if the table admits none (only for malformed tables).
  const std::optional<std::vector<GeneratorWord>>& generator_words(std::size_t i) const {
    return words_[i];
  }

  std::optional<std::size_t> find_label(std::string_view label) const;
  std::optional<std::size_t> vertex_index(std::string_view label) const;

  /// Structural identity: field, vertices, tags and structure constants.
  const std::string& fingerprint() const { return fingerprint_; }
  bool same_as(const Algebra& other) const { return fingerprint_ == other.fingerprint_; }

  /// The same structure constants read in another field (Q -> F_p only).
  std::shared_ptr<const Algebra> over_field(FieldSpec field) const;

  std::string describe() const;

 private:
  void compute_generators();

  std::string name_;
  FieldSpec field_;
  std::vector<std::string> vertices_;
  std::vector<BasisElement> basis_;
  std::vector<SparseVector> table_;
  std::vector<std::optional<std::size_t>> idempotents_;
  std::vector<std::size_t> radical_;
  std::vector<std::size_t> generators_;
  std::vector<std::optional<std::vector<GeneratorWord>>> words_;
  std::string fingerprint_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

enum class MorphismKind { QuotientByIdeal, CornerByIdempotent, Opposite, Section };

/// Basis-level algebra map.  transport has one row per source basis element
/// holding its image in the target basis; vertex_map sends a source vertex
/// to the target vertex its idempotent maps to (nullopt when it maps to 0).
struct AlgebraMorphism {
  MorphismKind kind = MorphismKind::QuotientByIdeal;
  AlgebraPtr source;
  AlgebraPtr target;
  Matrix transport;
  std::vector<std::optional<std::size_t>> vertex_map;
};

/// Diagnostics for a failure of multiplicativity; empty when the transport
/// realizes an algebra map (an anti-map for Opposite).
std::vector<std::string> verify_morphism(const AlgebraMorphism& m);

struct DerivedAlgebra {
  AlgebraPtr algebra;
  AlgebraMorphism morphism;
};

/// Compile a presentation.  Throws AlgebraError if no power of the arrow
/// ideal is found inside the ideal up to max_len, or if a relation is not
/// admissible.
AlgebraPtr build_algebra(const Presentation& p, std::size_t max_len = 64);
AlgebraPtr build_algebra(std::string_view text, std::size_t max_len = 64);

/// eps A eps; the morphism is the (non-unital) inclusion into A.
DerivedAlgebra corner_algebra(const AlgebraPtr& a, const std::vector<std::size_t>& eps_vertices);
/// A / A eps A; the morphism is the quotient map from A.
DerivedAlgebra quotient_by_idempotent_ideal(const AlgebraPtr& a,
                                            const std::vector<std::size_t>& eps_vertices);
/// Same basis, products reversed, source/target swapped.
DerivedAlgebra opposite_algebra(const AlgebraPtr& a);

/// A / W for a two-sided ideal W, using the basis elements listed in
/// `complement` as the quotient basis.  The morphism is the quotient map.
DerivedAlgebra quotient_by_ideal(const AlgebraPtr& a, const Subspace& ideal,
                                 const std::vector<std::size_t>& complement, std::string name);

/// Two-sided ideal generated by the given elements.
Subspace two_sided_ideal(const Algebra& a, const std::vector<std::vector<Scalar>>& generators);

/// Empty iff the table is associative, the idempotents are complete and
/// orthogonal, products respect the Peirce grading and the radical is
/// nilpotent.
std::vector<std::string> verify_algebra_axioms(const Algebra& a);

}  // namespace exrep
