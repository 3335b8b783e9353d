#pragma once

// The bundled reproduction suite: nine numbered criteria over the fixtures
// in data/, each producing a pass/fail line with a short diagnostic.

#include <cstdint>
#include <string>
#include <vector>

#include "exrep/exceptional.hpp"
#include "json.hpp"

namespace exrep {

struct CriterionResult {
  int id = 0;
  std::string location;  // what the criterion reproduces
  bool pass = false;
  std::string detail;    // one line; the diff or witness when failing
  nlohmann::json data;   // machine-readable evidence
};

struct ReproduceOptions {
  std::string data_dir;               // directory holding the fixtures
  std::uint32_t seed = 1;             // randomized property checks
  std::size_t random_modules = 60;    // per algebra in the property suite
};

/// Directory compiled in at build time (the repository's data/).
std::string default_data_dir();

constexpr int kCriterionCount = 9;

CriterionResult run_criterion(int id, const ReproduceOptions& opts);
std::vector<CriterionResult> reproduce_all(const ReproduceOptions& opts);

/// One line per criterion: "[PASS] 1  <location>: <detail>".
std::string format_matrix(const std::vector<CriterionResult>& results);
nlohmann::json matrix_json(const std::vector<CriterionResult>& results);

// ------------------------------------------------------------ CES table

/// One row of the CES table over K A3 / <alpha>: a sequence over A, its
/// image under - (x)_A K A3, and whether the image is listed as a CES.
struct TableRow {
  std::string label;
  bool marked = false;
  std::vector<std::string> sequence;  // module specs over A
  std::vector<std::string> image;     // module specs over R
};

/// Format: "<label> <marked|-> <spec>... => <spec>...", '#' comments.
std::vector<TableRow> parse_ces_table(std::string_view text);

/// Random modules: submodules and quotients of projectives, injectives and
/// their sums, deterministic in the seed.  Zero modules are skipped.
std::vector<RightModule> random_modules(const AlgebraPtr& a, std::size_t count, std::uint32_t seed);

}  // namespace exrep
