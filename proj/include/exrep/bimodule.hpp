#pragma once

// Bimodules, tensor and Hom functors, split-by-nilpotent extensions and
// idempotent recollements.
//
// An (A,B)-bimodule X is stored on its total space with a (left vertex,
// right vertex) grade per basis vector.  For a basis element a of A the
// matrix left(a) satisfies x * left(a) = a.x; for b in B, x * right(b) =
// x.b.  Hence left(a a') = left(a') left(a) and right(b b') = right(b) right(b').

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "exrep/algebra.hpp"
#include "exrep/module.hpp"

namespace exrep {

class Bimodule {
 public:
  Bimodule() = default;
  /// Validates grading, both module structures and commutation; throws
  /// ModuleError with a diagnostic otherwise.
  Bimodule(AlgebraPtr left_algebra, AlgebraPtr right_algebra,
           std::vector<std::pair<std::size_t, std::size_t>> grades, std::vector<Matrix> left,
           std::vector<Matrix> right, std::string name = {});

  const AlgebraPtr& left_algebra() const { return left_alg_; }
  const AlgebraPtr& right_algebra() const { return right_alg_; }
  std::size_t dim() const { return grades_.size(); }
  const std::vector<std::pair<std::size_t, std::size_t>>& grades() const { return grades_; }
  const Matrix& left(std::size_t a) const { return left_[a]; }
  const Matrix& right(std::size_t b) const { return right_[b]; }
  const std::string& name() const { return name_; }

  /// Basis indices with the given left (or right) grade.
  std::vector<std::size_t> with_left_grade(std::size_t u) const;
  std::vector<std::size_t> with_right_grade(std::size_t w) const;

  /// X as a right module over B.
  RightModule as_right_module() const;
  /// X as a left module over A, i.e. a right module over A^op.
  RightModule as_left_module() const;

 private:
  AlgebraPtr left_alg_;
  AlgebraPtr right_alg_;
  std::vector<std::pair<std::size_t, std::size_t>> grades_;
  std::vector<Matrix> left_;
  std::vector<Matrix> right_;
  std::string name_;
};

/// The regular (A,A)-bimodule.
Bimodule regular_bimodule(const AlgebraPtr& a);
/// Restrict the left action along phi: C -> A (C acts through phi).  Vectors
/// whose left grade has no preimage vertex are dropped (corner inclusions).
Bimodule restrict_left(const Bimodule& x, const AlgebraMorphism& phi);
Bimodule restrict_right(const Bimodule& x, const AlgebraMorphism& phi);
/// Sub-bimodule spanned by the given rows (must be closed and graded).
Bimodule sub_bimodule(const Bimodule& x, const Matrix& rows, std::string name = {});
Bimodule direct_sum(const Bimodule& x, const Bimodule& y);

/// Restriction of scalars along phi: C -> A for a right A-module.
RightModule restrict_module(const RightModule& m, const AlgebraMorphism& phi);
ModuleMap restrict_map(const ModuleMap& f, const AlgebraMorphism& phi);

/// M (x)_A X.
struct TensorResult {
  RightModule module;
  std::vector<std::size_t> pair_offset;  // internal layout, for tensor_map
  std::vector<Quotient> quotients;       // per right vertex
};
TensorResult tensor_full(const RightModule& m, const Bimodule& x);
RightModule tensor_with_bimodule(const RightModule& m, const Bimodule& x);
/// f (x) X : M (x) X -> M' (x) X.
ModuleMap tensor_map(const RightModule& m, const RightModule& m2, const ModuleMap& f, const Bimodule& x);

/// Hom_B(X, N) as a right A-module, (f.a)(x) = f(a.x).
RightModule hom_from_bimodule(const Bimodule& x, const RightModule& n);

// ------------------------------------------------------------ functors

enum class FunctorKind {
  TensorUpR,    // - (x)_A R : mod A -> mod R
  TensorDownA,  // - (x)_R A : mod R -> mod A
  HomUp,        // Hom_A(R, -) : mod A -> mod R
  HomDown,      // Hom_R(A, -) : mod R -> mod A
  ResSigma,     // restriction along the section A -> R : mod R -> mod A
  ResXi,        // restriction along R -> A : mod A -> mod R
  IStar,        // i_*  : mod Abar -> mod A
  IUpperStar,   // i^*  = - (x)_A Abar
  IShriek,      // i^!  = Hom_A(Abar, -)
  JLower,       // j_!  = - (x)_Atilde eps A
  JUpperStar,   // j^*  = (-) eps
  JStar,        // j_*  = Hom_Atilde(A eps, -)
};

std::string functor_name(FunctorKind k);

/// Concurrent memo table for functor images, keyed by functor, context and
/// module fingerprint.  Entries are idempotent, so last write wins.
class FunctorCache {
 public:
  std::optional<RightModule> find(const std::string& key) const;
  void store(const std::string& key, const RightModule& m);
  std::size_t size() const;
  std::size_t hits() const;

 private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, RightModule> table_;
  mutable std::size_t hits_ = 0;
};

struct SplitExtension {
  AlgebraPtr r;
  AlgebraPtr a;
  AlgebraMorphism xi;     // R -> A
  AlgebraMorphism sigma;  // A -> R
  Subspace q;             // kernel of xi inside R
  std::vector<std::size_t> complement;  // basis of R spanning the image of sigma
  Bimodule q_aa;     // _A Q_A
  Bimodule r_ar;     // _A R_R
  Bimodule a_ra;     // _R A_A
  Bimodule r_ra;     // _R R_A
  Bimodule a_ar;     // _A A_R
  bool is_projective_left = false;  // _A R projective
  std::string context;              // cache key prefix
  std::shared_ptr<FunctorCache> cache = std::make_shared<FunctorCache>();

  RightModule apply(FunctorKind kind, const RightModule& m) const;
  /// _A R as a right A^op-module.
  RightModule left_r() const { return r_ar.as_left_module(); }
};

/// Split extension of R by the ideal generated by the kernel arrows.
/// Throws AlgebraError if an arrow is unknown or the arrow-free complement
/// is not a subalgebra (with a witness product).
SplitExtension build_split_extension(const AlgebraPtr& r, const std::vector<std::string>& kernel_arrows);

struct Recollement {
  AlgebraPtr a;
  std::vector<std::size_t> eps;
  AlgebraPtr abar;    // A / A eps A
  AlgebraPtr atilde;  // eps A eps
  AlgebraMorphism pi;     // A -> Abar
  AlgebraMorphism iota;   // Atilde -> A (non-unital)
  Bimodule abar_a_abar;   // _A Abar_Abar   (i^*)
  Bimodule abar_abar_a;   // _Abar Abar_A   (i^!)
  Bimodule epsa;          // _Atilde eps A_A (j_!)
  Bimodule aeps;          // _A A eps_Atilde (j_*)
  bool i_upper_exact = false;   // _A Abar projective
  bool i_shriek_exact = false;  // Abar_A projective
  std::string context;          // cache key prefix
  std::shared_ptr<FunctorCache> cache = std::make_shared<FunctorCache>();

  RightModule apply(FunctorKind kind, const RightModule& m) const;
};

Recollement build_recollement(const AlgebraPtr& a, const std::vector<std::size_t>& eps_vertices);

struct LawFailure {
  std::string law;     // e.g. "(1) i^* j_! = 0", "(R1) adjunction (j^*, j_*)"
  std::string detail;  // witness description
};

struct RecollementSamples {
  std::vector<RightModule> over_a;
  std::vector<RightModule> over_abar;
  std::vector<RightModule> over_atilde;
};

/// Simple, projective, injective and (up to four vertices) thin modules,
/// deduplicated.
std::vector<RightModule> module_samples(const AlgebraPtr& a);

/// Default samples: module_samples of each of the three algebras.
RecollementSamples default_samples(const Recollement& rec);

struct LawReport {
  std::vector<LawFailure> failures;
  std::size_t checks = 0;
  /// Which bimodule realizes j_*: the eps A form is ill-typed for right
  /// modules, the A eps form is checked numerically.
  std::string jstar_note;
  bool ok() const { return failures.empty(); }
};

LawReport verify_recollement_laws(const Recollement& rec, const RecollementSamples& samples,
                                  std::uint32_t seed = 1);

/// Short exact sequence 0 -> S -> M -> M/S -> 0 from a random submodule.
struct ShortExact {
  RightModule sub, mid, quot;
  ModuleMap inc, proj;
};
ShortExact random_short_exact(const RightModule& m, std::uint32_t seed);
/// Checks 0 -> F(S) -> F(M) -> F(Q) -> 0 is exact by rank arithmetic.
bool is_short_exact(const ShortExact& s);

}  // namespace exrep
