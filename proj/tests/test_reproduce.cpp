#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>

#include "exrep/reproduce.hpp"
#include "test_support.hpp"

using namespace exrep;
using exrep::testing::load_algebra;
using exrep::testing::read_fixture;

namespace {

ReproduceOptions fixtures_options() {
  ReproduceOptions o;
  o.data_dir = EXREP_DATA_DIR;
  return o;
}

// A copy of data/ with one file replaced.
std::string patched_data_dir(const std::string& file, const std::string& contents) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / ("exrep_patched_" + file);
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (const auto& e : fs::directory_iterator(EXREP_DATA_DIR)) fs::copy(e.path(), dir / e.path().filename());
  std::ofstream(dir / file) << contents;
  return dir.string();
}

}  // namespace

TEST_CASE("CES table file") {
  auto rows = parse_ces_table(read_fixture("ces_A3_mod_alpha.txt"));
  REQUIRE(rows.size() == 9);
  std::size_t marked = 0;
  for (const auto& r : rows) {
    marked += r.marked;
    CHECK(r.sequence.size() == 3);
    CHECK(r.image.size() == 3);
  }
  CHECK(marked == 5);
  CHECK(rows[0].label == "a");
  CHECK(rows[0].image[2] == "thin:1,2,3");
  CHECK_THROWS_AS(parse_ces_table("a maybe thin:1 => thin:1\n"), ParseError);
  CHECK_THROWS_AS(parse_ces_table("a - thin:1 thin:2\n"), ParseError);
  CHECK_THROWS_AS(parse_ces_table("a - thin:1 thin:2 => thin:1\n"), ParseError);
}

TEST_CASE("random modules are deterministic and nonzero") {
  auto a = load_algebra("cycle3_ab.alg");
  auto x = random_modules(a, 30, 7);
  auto y = random_modules(a, 30, 7);
  REQUIRE(x.size() == 30);
  for (std::size_t k = 0; k < x.size(); ++k) {
    CHECK_FALSE(x[k].is_zero());
    CHECK(x[k].fingerprint() == y[k].fingerprint());
  }
  // Not all alike.
  std::set<std::string> prints;
  for (const auto& m : x) prints.insert(m.fingerprint());
  CHECK(prints.size() > 5);
}

TEST_CASE("reproduction criteria on the bundled fixtures") {
  auto opts = fixtures_options();
  for (int id : {1, 2, 4, 5, 6, 8, 9}) {
    auto r = run_criterion(id, opts);
    INFO(r.id << ": " << r.detail);
    CHECK(r.pass);
  }
}

TEST_CASE("criteria that disagree with the published data fail with a diagnosis") {
  auto opts = fixtures_options();
  // Row (f): 1 (x) Q = (2/3) gives Hom((2/3), (2/3)) != 0, and the image
  // (1/2/3, 2/3, 2) has Hom((2/3), (1/2/3)) != 0.
  auto r3 = run_criterion(3, opts);
  CHECK_FALSE(r3.pass);
  CHECK(r3.detail.find("(f)") != std::string::npos);
  CHECK(r3.detail.find("hypothesis (3)") != std::string::npos);
  CHECK(r3.detail.find("1 of 5") != std::string::npos);
  // _A R decomposes as P1 + P2 + P3^3 (dimension 1 + 2 + 3*2 = 9 = dim R).
  auto r7 = run_criterion(7, opts);
  CHECK_FALSE(r7.pass);
  CHECK(r7.data["left_projective"] == true);
  CHECK(r7.data["multiplicities"] == nlohmann::json({1, 1, 3}));
}

TEST_CASE("perturbed fixture makes the table criterion fail with a diff") {
  auto opts = fixtures_options();
  opts.data_dir = patched_data_dir("A3_mod_alpha.alg",
                                   "algebra A3_perturbed\nfield Q\nvertices 1 2 3\narrow alpha 1 2\narrow beta 2 3\n"
                                   "relation alpha*beta\nend\n");
  auto r = run_criterion(1, opts);
  CHECK_FALSE(r.pass);
  CHECK(r.detail.find("missing") != std::string::npos);
  CHECK_FALSE(r.data["missing"].empty());
  opts.data_dir = "/nonexistent";
  auto e = run_criterion(2, opts);
  CHECK_FALSE(e.pass);
  CHECK(e.detail.rfind("error:", 0) == 0);
  CHECK_THROWS(run_criterion(10, fixtures_options()));
}

TEST_CASE("reproduction output is deterministic") {
  auto opts = fixtures_options();
  std::vector<CriterionResult> a{run_criterion(1, opts), run_criterion(6, opts)};
  std::vector<CriterionResult> b{run_criterion(1, opts), run_criterion(6, opts)};
  CHECK(matrix_json(a).dump() == matrix_json(b).dump());
  CHECK(format_matrix(a) == format_matrix(b));
  CHECK(format_matrix(a).rfind("[PASS] 1", 0) == 0);
}
