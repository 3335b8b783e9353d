#pragma once

// Exceptional modules and sequences, theorem checkers for split extensions
// and recollements, and enumeration of bricks and complete exceptional
// sequences.
//
// Orientation: in a sequence (M_1, ..., M_r) the conditions for i < j are
// Hom(M_j, M_i) = 0 and Ext^n(M_j, M_i) = 0 for all n >= 1.

#include <cstddef>
#include <string>
#include <vector>

#include "exrep/bimodule.hpp"
#include "exrep/module.hpp"
#include "json.hpp"

namespace exrep {

enum class Certainty { Certified, UpToBound };

std::string certainty_name(Certainty c);

/// A condition that failed or could not be certified.  Indices are 1-based
/// positions in the sequence (i == j for conditions on a single module).
struct Witness {
  std::string condition;  // "E1", "E2", "E1'", "E2'", "(3)", "(4)", ...
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t n = 0;      // Ext degree, 0 for Hom conditions
  std::size_t dim = 0;    // offending dimension (0 for an uncertified vanishing)
  bool uncertified = false;
};

struct ExceptionalReport {
  std::string subject;
  bool verdict = false;
  Certainty certainty = Certainty::Certified;
  std::size_t n_max = 0;
  bool complete = false;
  std::vector<Witness> witnesses;
  std::vector<RightModule> images;

  nlohmann::json to_json() const;
};

constexpr std::size_t kDefaultExtBound = 24;

/// Resolutions of the members are computed once and reused for every Ext.
class ExtOracle {
 public:
  explicit ExtOracle(std::size_t n_max = kDefaultExtBound) : n_max_(n_max) {}
  /// Ext^0..n_max of (m, n), certified when the resolution of m allows it.
  ExtResult ext(const RightModule& m, const RightModule& n);
  std::size_t n_max() const { return n_max_; }

 private:
  std::size_t n_max_;
  std::vector<std::pair<std::string, Resolution>> cache_;
};

/// Records "Ext^n(m, n) = 0 for all n >= 1" into the report: a witness for
/// the first nonzero degree, or an uncertified marker.  Returns true iff
/// the vanishing is certified.
bool record_ext_vanishing(ExceptionalReport& rep, const ExtResult& e, const std::string& condition, std::size_t i,
                          std::size_t j);

ExceptionalReport is_exceptional(const RightModule& m, std::size_t n_max = kDefaultExtBound);
ExceptionalReport is_exceptional_sequence(const std::vector<RightModule>& seq,
                                          std::size_t n_max = kDefaultExtBound);
ExceptionalReport semibrick_report(const std::vector<RightModule>& modules);

struct HypothesisResult {
  std::string id;  // "(1)".."(4)"
  bool holds = false;
  Certainty certainty = Certainty::Certified;
  std::vector<Witness> witnesses;
};

struct TheoremReport {
  std::string theorem;
  std::vector<HypothesisResult> hypotheses;
  bool hypotheses_certified = false;  // every hypothesis holds and is Certified
  /// Identities that the theorem's proof relies on, checked numerically.
  std::vector<HypothesisResult> identities;
  std::vector<ExceptionalReport> conclusions;
  /// Hypotheses certified but some conclusion false: must never happen.
  bool implication_violated = false;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
};

/// Hypotheses (1)-(4) for (M_1, ..., M_r) over se.a and the exceptionality of
/// (M_1 (x) R, ..., M_r (x) R), computed independently.
TheoremReport check_split_theorem(const SplitExtension& se, const std::vector<RightModule>& seq,
                                  std::size_t n_max = kDefaultExtBound);

/// Exactness certificates, images under i_* and j_!, and the identities
/// dim Ext^n(F X, F X) = dim Ext^n(X, X) for 1 <= n <= n_max, reported as
/// identities so they are visible even when the certificates fail.
TheoremReport check_recollement_theorem(const Recollement& rec, const std::vector<RightModule>& over_abar,
                                        const std::vector<RightModule>& over_atilde,
                                        std::size_t n_max = kDefaultExtBound);

// ------------------------------------------------------------ enumeration

struct EnumerationConfig {
  FieldSpec field = FieldSpec::prime_field(2);
  std::size_t dim_bound = 1;
  std::size_t budget = 2'000'000;  // candidate representations
};

struct BrickEnumeration {
  std::vector<RightModule> bricks;  // over cfg.field, canonical order
  bool complete = true;             // false if the budget ran out
  std::size_t candidates = 0;
};

/// All bricks with dim_v <= dim_bound whose generator matrices have entries
/// in the configured prime field, up to isomorphism, in canonical order
/// (dimension vector, then matrix entries, lexicographically).
BrickEnumeration enumerate_bricks(const AlgebraPtr& a, const EnumerationConfig& cfg = {});

struct CesEnumeration {
  std::vector<RightModule> exceptional;            // over the algebra's own field, canonical order
  std::vector<std::vector<std::size_t>> sequences;  // indices into `exceptional`
  bool complete = true;
  std::size_t uncertified_pairs = 0;  // pairs rejected because Ext vanishing was not certified
  std::size_t dropped_on_lift = 0;    // F_p bricks that are not bricks over the algebra's field
};

/// Complete exceptional sequences built from enumerated bricks.  Candidates
/// are generated over cfg.field and every verdict is recomputed over the
/// algebra's own field.
CesEnumeration enumerate_ces(const AlgebraPtr& a, const EnumerationConfig& cfg = {},
                             std::size_t n_max = kDefaultExtBound);

/// Modules for a sequence file: one module per non-comment line, either a
/// named spec (simple:/proj:/inj:/thin:) or a module file path relative to
/// base_dir.
std::vector<RightModule> parse_sequence_file(const AlgebraPtr& a, std::string_view text,
                                             const std::string& base_dir = ".");

/// Short human-readable name, e.g. "(1/2/3)" or "(2,3)".
std::string module_name(const RightModule& m);

nlohmann::json module_json(const RightModule& m);

}  // namespace exrep
