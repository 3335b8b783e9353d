#pragma once

// Shared helpers for the unit tests: fixture loading.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "exrep/algebra.hpp"

#ifndef EXREP_DATA_DIR
#error "EXREP_DATA_DIR must point at the data/ fixtures"
#endif

namespace exrep::testing {

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(EXREP_DATA_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline AlgebraPtr load_algebra(const std::string& name) { return build_algebra(read_fixture(name)); }

}  // namespace exrep::testing
