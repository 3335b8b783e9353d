// Runs the nine reproduction criteria and prints one line per criterion.
// Exit status 0 iff every criterion passes.

#include <iostream>

#include "exrep/reproduce.hpp"

int main(int argc, char** argv) {
  exrep::ReproduceOptions opts;
  opts.data_dir = argc > 1 ? argv[1] : exrep::default_data_dir();
  auto results = exrep::reproduce_all(opts);
  std::cout << exrep::format_matrix(results);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.pass;
  std::cout << passed << "/" << results.size() << " criteria pass\n";
  return passed == results.size() ? 0 : 1;
}
