// Copyright 2026 The cubefield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CUBEFIELD_TESTS_FIXTURES_HPP_
#define CUBEFIELD_TESTS_FIXTURES_HPP_

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cubefield/complex.hpp"
#include "cubefield/generators.hpp"

namespace cubefield::testing {

inline std::string read_fixture_text(const std::string& name) {
  std::ifstream in(std::string(CUBEFIELD_DATA_DIR) + "/" + name + ".cxc");
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline CubeComplex fixture(const std::string& name) {
  return parse_complex(read_fixture_text(name));
}

inline std::vector<std::string> fixture_names() {
  return {"square", "tripod", "cube3", "grid1x2", "book3"};
}

inline std::vector<std::string> all_fixture_names() {
  return {"square", "tripod", "cube3", "grid1x2", "book3", "path5"};
}

inline Bits B(const char* s) { return Bits::from_string(s); }

// Seeded random median complexes kept small enough for dense checks.
inline CubeComplex random_complex(std::uint64_t seed) {
  const std::size_t k = 4 + seed % 6;
  return make_random_median(6, k, 1000 + seed);
}

}  // namespace cubefield::testing

#endif  // CUBEFIELD_TESTS_FIXTURES_HPP_
