#pragma once

// Right modules over structure-constant algebras.
//
// A right module M is stored as one vector space M_v = M e_v per vertex and
// one matrix rho(b): d_u x d_v per basis element b: u -> v, so that for a row
// vector m in M_u, m * rho(b) is m.b in M_v.  Idempotents act as identities.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "exrep/algebra.hpp"
#include "exrep/linalg.hpp"

namespace exrep {

class ModuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RightModule {
 public:
  RightModule() = default;
  /// `actions` holds one matrix per basis element of the algebra (entries
  /// for idempotents are ignored and replaced by identities).  Throws
  /// ModuleError naming the offending basis pair if an axiom fails.
  RightModule(AlgebraPtr algebra, std::vector<std::size_t> dims, std::vector<Matrix> actions,
              std::string label = {});

  /// Build from matrices for the algebra generators only (keyed by basis
  /// index); other radical elements act through their generator words.
  static RightModule from_generators(AlgebraPtr algebra, std::vector<std::size_t> dims,
                                     const std::vector<std::pair<std::size_t, Matrix>>& generator_actions,
                                     std::string label = {});
  static RightModule zero(AlgebraPtr algebra);

  const AlgebraPtr& algebra() const { return algebra_; }
  FieldSpec field() const { return algebra_->field(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim(std::size_t v) const { return dims_[v]; }
  std::size_t total_dim() const { return offsets_.back(); }
  std::size_t offset(std::size_t v) const { return offsets_[v]; }
  bool is_zero() const { return total_dim() == 0; }

  const Matrix& action(std::size_t basis_index) const { return actions_[basis_index]; }
  const std::vector<Matrix>& actions() const { return actions_; }
  /// Action of a basis element on the total space (total_dim x total_dim).
  Matrix total_action(std::size_t basis_index) const;

  const std::string& label() const { return label_; }
  RightModule with_label(std::string label) const;

  /// Canonical description of the data (algebra, dims, generator matrices).
  std::string fingerprint() const;

 private:
  AlgebraPtr algebra_;
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Matrix> actions_;
  std::string label_;
};

/// Diagnostics for the module axioms; empty when every product of basis
/// elements acts as the product of their matrices.
std::vector<std::string> verify_module_axioms(const AlgebraPtr& algebra, const std::vector<std::size_t>& dims,
                                              const std::vector<Matrix>& actions);

/// Morphism of right modules: one matrix f_v: d_v(M) x d_v(N) per vertex.
struct ModuleMap {
  std::vector<Matrix> blocks;

  /// Block-diagonal matrix on the total spaces.
  Matrix total(const RightModule& source, const RightModule& target) const;
  bool is_zero() const;
};

bool is_homomorphism(const RightModule& m, const RightModule& n, const ModuleMap& f);
ModuleMap compose(const ModuleMap& first, const ModuleMap& second);  // first, then second
ModuleMap identity_map(const RightModule& m);
ModuleMap zero_map(const RightModule& m, const RightModule& n);
ModuleMap linear_combination(const RightModule& m, const RightModule& n, const std::vector<ModuleMap>& maps,
                             const std::vector<Scalar>& coefficients);

// ------------------------------------------------------------ constructors

RightModule simple_module(const AlgebraPtr& a, std::size_t v);
RightModule projective_module(const AlgebraPtr& a, std::size_t v);
RightModule injective_module(const AlgebraPtr& a, std::size_t v);
/// Dims 1 on the vertex subset, generators inside the subset act as 1.
/// Throws ModuleError if the relations of the algebra are violated.
RightModule thin_module(const AlgebraPtr& a, const std::vector<std::size_t>& support);
RightModule direct_sum(const AlgebraPtr& a, const std::vector<RightModule>& parts);

/// Inclusion of the submodule generated by the given vectors of the total
/// space, together with the submodule itself.
struct Submodule {
  RightModule module;
  ModuleMap inclusion;
  std::vector<Matrix> bases;  // per vertex, rows span the subspace of M_v
};
Submodule generated_submodule(const RightModule& m, const Matrix& total_vectors);
/// Submodule given by per-vertex subspaces that must already be closed.
Submodule submodule_from_bases(const RightModule& m, std::vector<Matrix> bases);
Submodule kernel(const RightModule& m, const RightModule& n, const ModuleMap& f);
/// Image of f as a submodule of N.
Submodule image(const RightModule& m, const RightModule& n, const ModuleMap& f);

struct QuotientModule {
  RightModule module;
  ModuleMap projection;
};
QuotientModule quotient_module(const RightModule& m, const Submodule& sub);

/// Apply an invertible change of basis at every vertex (for tests).
RightModule change_basis(const RightModule& m, const std::vector<Matrix>& invertible);

// ------------------------------------------------------------ Hom

std::vector<ModuleMap> hom_basis(const RightModule& m, const RightModule& n);
std::size_t hom_dim(const RightModule& m, const RightModule& n);

struct BrickReport {
  std::size_t end_dim = 0;
  bool is_brick = false;
};
BrickReport brick_report(const RightModule& m);
bool is_semibrick(const std::vector<RightModule>& modules);

struct IsoResult {
  std::optional<ModuleMap> map;  // an invertible intertwiner M -> N
  bool inconclusive = false;     // search budget exhausted on a nonzero Hom space
  explicit operator bool() const { return map.has_value(); }
};
IsoResult iso_test(const RightModule& m, const RightModule& n, std::size_t budget = 4096);
bool is_isomorphism(const RightModule& m, const RightModule& n, const ModuleMap& f);

// ------------------------------------------------------------ covers

/// Radical layer description such as "1/2/3" (top first) or "1,2".
std::string layer_label(const RightModule& m);

struct TopAndCover {
  std::vector<std::size_t> multiplicities;  // copies of S_v in the top
  RightModule cover;                        // P(M) = (+)_v (e_v A)^{mult_v}, vertex order
  ModuleMap cover_map;                      // P(M) -> M, surjective
};
TopAndCover top_and_cover(const RightModule& m);

/// Radical submodule M.rad.
Submodule radical_submodule(const RightModule& m);

bool is_projective_module(const RightModule& m);

// ------------------------------------------------------------ resolutions

enum class ResolutionStatus { FinitePd, Periodic, TruncatedAt };

/// Bounded complex of modules ... -> P_1 -> P_0 with an augmentation to M.
/// differentials[k] : terms[k] -> terms[k-1] for k >= 1; differentials[0]
/// is the augmentation terms[0] -> M.
struct ProjectiveComplex {
  RightModule resolved;
  std::vector<RightModule> terms;
  std::vector<ModuleMap> differentials;
};

struct Resolution {
  ProjectiveComplex complex;
  std::vector<std::vector<std::size_t>> cover_multiplicities;  // per term
  std::vector<RightModule> syzygies;                           // Omega^0 = M, Omega^1, ...
  ResolutionStatus status = ResolutionStatus::TruncatedAt;
  std::size_t pd = 0;       // FinitePd: projective dimension
  std::size_t lead = 0;     // Periodic: Omega^lead ~ Omega^(lead + period)
  std::size_t period = 0;
  std::size_t truncated_at = 0;
  bool iso_inconclusive = false;  // some periodicity comparison was inconclusive

  std::string status_string() const;
};

constexpr std::size_t kDefaultMaxSteps = 24;

/// Minimal projective resolution.  Covers are computed until a syzygy is
/// zero, a syzygy repeats up to isomorphism, or max_steps covers have been
/// taken.  At least `min_terms` terms are computed whenever the resolution
/// does not terminate earlier (used to read off Ext beyond the period).
Resolution minimal_resolution(const RightModule& m, std::size_t max_steps = kDefaultMaxSteps,
                              std::size_t min_terms = 0);

/// Add the contractible complex X --id--> X in degrees (k, k-1), k >= 1.
ProjectiveComplex pad_complex(const ProjectiveComplex& c, std::size_t k, const RightModule& x);

/// Ext^0..Ext^n_max dimensions from any projective resolution.
std::vector<std::size_t> ext_dims_from_complex(const ProjectiveComplex& c, const RightModule& n,
                                               std::size_t n_max);

enum class ExtCertainty { ExactUpTo, AllHigherVanish, EventuallyPeriodic };

struct ExtResult {
  std::vector<std::size_t> dims;  // Ext^0 .. Ext^n_max
  ExtCertainty certainty = ExtCertainty::ExactUpTo;
  std::size_t pd = 0;
  std::size_t lead = 0;
  std::size_t period = 0;
  /// Every Ext^n, n >= 1, vanishes and this is certified (finite
  /// projective dimension or a checked period).
  bool higher_vanish_certified = false;
  /// Some Ext^n with n >= 1 is nonzero (the smallest such n, 0 if none).
  std::size_t first_nonzero = 0;

  std::string certainty_string() const;
};

ExtResult ext_dims(const RightModule& m, const RightModule& n, std::size_t n_max,
                   std::size_t max_steps = kDefaultMaxSteps);
/// Same, reusing a resolution of M.
ExtResult ext_dims(const Resolution& res, const RightModule& n, std::size_t n_max);

// ------------------------------------------------------------ files

/// Parse the module file format; the algebra must be given.
RightModule parse_module_file(const AlgebraPtr& a, std::string_view text);
/// Render in the module file format (maps for generators, nonzero only).
std::string format_module(const RightModule& m, const std::string& name = {});
/// Named constructors: simple:<v>, proj:<v>, inj:<v>, thin:<v1,v2,...>.
/// Returns nullopt if the text is not of that form.
std::optional<RightModule> named_module(const AlgebraPtr& a, std::string_view spec);

/// Lift a module over F_p with entries in [0, p) to the rationals algebra
/// `target` (same basis).  Throws ModuleError if the lift violates axioms.
RightModule lift_to(const AlgebraPtr& target, const RightModule& m);

}  // namespace exrep
