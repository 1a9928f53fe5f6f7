// Copyright 2026 geodetect authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstdio>
#include <stdexcept>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "geodetect/io.hpp"
#include "test_util.hpp"

using namespace geodetect;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("graph files round trip and carry the documented header") {
  const GraphSample g = sample_er(23, 0.375, SeedSpec{101, 0});
  std::stringstream ss;
  write_graph(ss, g);
  const std::string text = ss.str();
  CHECK(text.rfind("rgg-graph v1 n=23 p=0.375\n", 0) == 0);

  const GraphSample back = read_graph(ss);
  CHECK(back == g);
  CHECK(back.p() == g.p());

  // Edges are 1-indexed, i < j, ascending.
  std::stringstream lines(text);
  std::string line;
  std::getline(lines, line);
  std::size_t prev_i = 0, prev_j = 0;
  while (std::getline(lines, line)) {
    std::size_t i = 0, j = 0;
    REQUIRE(std::sscanf(line.c_str(), "%zu %zu", &i, &j) == 2);
    CHECK(i >= 1);
    CHECK(i < j);
    CHECK(std::tie(prev_i, prev_j) < std::tie(i, j));
    prev_i = i;
    prev_j = j;
  }
}

TEST_CASE("matrix files round trip bit-exactly") {
  const SymMatrixSample m = sample_gaussian_matrix(17, SeedSpec{102, 0});
  const std::string path = temp_path("geodetect_test_matrix.bin");
  write_matrix_file(path, m);
  const SymMatrixSample back = read_matrix_file(path);
  REQUIRE(back.n() == m.n());
  CHECK(back.upper_entries() == m.upper_entries());
  std::filesystem::remove(path);
}

TEST_CASE("matrix reader rejects truncated payloads") {
  const std::string path = temp_path("geodetect_test_matrix_trunc.bin");
  {
    std::ofstream os(path, std::ios_base::binary);
    os << "symmat v1 n=8\n";
    const double x = 1.0;
    os.write(reinterpret_cast<const char*>(&x), sizeof(x));
  }
  CHECK_THROWS_AS(read_matrix_file(path), std::runtime_error);
  std::filesystem::remove(path);
}

TEST_CASE("spectrum generator shorthands") {
  const Spectrum flat = parse_spectrum_spec("flat:5");
  CHECK(flat.dim() == 5);
  CHECK(flat.weight(4) == 1.0);

  const Spectrum pw = parse_spectrum_spec("power:4:1/3");
  CHECK(pw.dim() == 4);
  CHECK(pw.weight(0) == 1.0);
  CHECK(pw.weight(1) == doctest::Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(1e-15));

  const Spectrum geo = parse_spectrum_spec("geometric:3:0.5");
  CHECK(geo.weight(0) == 1.0);
  CHECK(geo.weight(1) == 0.5);
  CHECK(geo.weight(2) == 0.25);

  CHECK_THROWS_AS(parse_spectrum_spec("banana:3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spectrum_spec("flat"), std::invalid_argument);
}

TEST_CASE("spectrum file serialization round trips") {
  CounterRng rng(SeedSpec{103, 0});
  const Spectrum s = testutil::random_spectrum(rng, 100);
  const std::string path = temp_path("geodetect_test_spectrum.txt");
  {
    std::ofstream os(path);
    write_spectrum(os, s);
  }
  const Spectrum back = parse_spectrum_spec("file:" + path);
  REQUIRE(back.dim() == s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) CHECK(back.weight(i) == s.weight(i));
  std::filesystem::remove(path);
}

TEST_CASE("statistic sample files round trip") {
  std::vector<double> values{0.0, -1.25, 3.14159265358979, 1e-300, 2.5e17};
  const std::string path = temp_path("geodetect_test_stats.txt");
  write_statistic_samples(path, values);
  CHECK(read_statistic_samples(path) == values);
  std::filesystem::remove(path);
}
