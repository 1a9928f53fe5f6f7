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

#include "geodetect/io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace geodetect {

namespace {

double parse_real_or_fraction(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const double num = std::stod(text.substr(0, slash));
    const double den = std::stod(text.substr(slash + 1));
    if (den == 0.0) throw std::invalid_argument("fraction with zero denominator: " + text);
    return num / den;
  }
  return std::stod(text);
}

std::vector<std::string> split_colon(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(':', start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::ifstream open_in(const std::string& path, std::ios_base::openmode mode) {
  std::ifstream is(path, mode);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  return is;
}

std::ofstream open_out(const std::string& path, std::ios_base::openmode mode) {
  std::ofstream os(path, mode);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

}  // namespace

Spectrum parse_spectrum_spec(const std::string& spec) {
  const auto parts = split_colon(spec);
  const std::string& kind = parts[0];
  if (kind == "flat" && parts.size() == 2) {
    return Spectrum::flat(static_cast<std::size_t>(std::stoull(parts[1])));
  }
  if (kind == "power" && parts.size() == 3) {
    return Spectrum::power_law(static_cast<std::size_t>(std::stoull(parts[1])),
                               parse_real_or_fraction(parts[2]));
  }
  if (kind == "geometric" && parts.size() == 3) {
    return Spectrum::geometric(static_cast<std::size_t>(std::stoull(parts[1])),
                               parse_real_or_fraction(parts[2]));
  }
  if (kind == "file" && parts.size() >= 2) {
    auto is = open_in(spec.substr(5), std::ios_base::in);
    return read_spectrum(is);
  }
  throw std::invalid_argument("unrecognized spectrum spec: " + spec +
                              " (expected flat:<d>, power:<d>:<gamma>, geometric:<d>:<rho>, "
                              "file:<path>)");
}

void write_spectrum(std::ostream& os, const Spectrum& s) {
  char buf[40];
  for (double w : s.weights()) {
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), w);
    os.write(buf, end - buf);
    os.put('\n');
  }
}

Spectrum read_spectrum(std::istream& is) {
  std::vector<double> w;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    w.push_back(std::stod(line));
  }
  return Spectrum(std::move(w));
}

void write_graph(std::ostream& os, const GraphSample& g) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "rgg-graph v1 n=%zu p=%.17g\n", g.n(), g.p());
  os << buf;
  for (std::size_t i = 0; i + 1 < g.n(); ++i) {
    for (std::size_t j = i + 1; j < g.n(); ++j) {
      if (g.edge(i, j)) os << (i + 1) << ' ' << (j + 1) << '\n';
    }
  }
}

GraphSample read_graph(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("graph file: missing header");
  std::size_t n = 0;
  double p = 0.0;
  if (std::sscanf(header.c_str(), "rgg-graph v1 n=%zu p=%lg", &n, &p) != 2) {
    throw std::runtime_error("graph file: bad header: " + header);
  }
  GraphSample g(n, p);
  std::size_t i = 0, j = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (!(ls >> i >> j)) throw std::runtime_error("graph file: bad edge line: " + line);
    if (i < 1 || j <= i || j > n) {
      throw std::runtime_error("graph file: edge out of range: " + line);
    }
    g.set_edge(i - 1, j - 1, true);
  }
  return g;
}

void write_graph_file(const std::string& path, const GraphSample& g) {
  auto os = open_out(path, std::ios_base::out);
  write_graph(os, g);
}

GraphSample read_graph_file(const std::string& path) {
  auto is = open_in(path, std::ios_base::in);
  return read_graph(is);
}

void write_matrix(std::ostream& os, const SymMatrixSample& m) {
  os << "symmat v1 n=" << m.n() << '\n';
  static_assert(std::endian::native == std::endian::little,
                "matrix files are little-endian; big-endian hosts need byte swaps");
  const auto& entries = m.upper_entries();
  os.write(reinterpret_cast<const char*>(entries.data()),
           static_cast<std::streamsize>(entries.size() * sizeof(double)));
}

SymMatrixSample read_matrix(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("matrix file: missing header");
  std::size_t n = 0;
  if (std::sscanf(header.c_str(), "symmat v1 n=%zu", &n) != 1) {
    throw std::runtime_error("matrix file: bad header: " + header);
  }
  SymMatrixSample m(n);
  auto& entries = m.upper_entries();
  is.read(reinterpret_cast<char*>(entries.data()),
          static_cast<std::streamsize>(entries.size() * sizeof(double)));
  if (static_cast<std::size_t>(is.gcount()) != entries.size() * sizeof(double)) {
    throw std::runtime_error("matrix file: truncated payload");
  }
  return m;
}

void write_matrix_file(const std::string& path, const SymMatrixSample& m) {
  auto os = open_out(path, std::ios_base::out | std::ios_base::binary);
  write_matrix(os, m);
}

SymMatrixSample read_matrix_file(const std::string& path) {
  auto is = open_in(path, std::ios_base::in | std::ios_base::binary);
  return read_matrix(is);
}

void write_statistic_samples(const std::string& path, const std::vector<double>& values) {
  auto os = open_out(path, std::ios_base::out);
  char buf[40];
  for (double v : values) {
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    os.write(buf, end - buf);
    os.put('\n');
  }
}

std::vector<double> read_statistic_samples(const std::string& path) {
  auto is = open_in(path, std::ios_base::in);
  std::vector<double> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    out.push_back(std::stod(line));
  }
  return out;
}

}  // namespace geodetect
