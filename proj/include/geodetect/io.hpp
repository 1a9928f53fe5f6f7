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

#ifndef GEODETECT_IO_HPP_
#define GEODETECT_IO_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "geodetect/sampling.hpp"
#include "geodetect/spectrum.hpp"

namespace geodetect {

// Spectrum sources accepted everywhere a spectrum is named:
//   flat:<d>            all-ones
//   power:<d>:<gamma>   alpha_i = i^{-gamma}; gamma accepts "a/b" fractions
//   geometric:<d>:<rho> alpha_i = rho^{i-1}
//   file:<path>         text file, one weight per line
Spectrum parse_spectrum_spec(const std::string& spec);

void write_spectrum(std::ostream& os, const Spectrum& s);
Spectrum read_spectrum(std::istream& is);

// Graph files: header "rgg-graph v1 n=<n> p=<p>", then one "i j" edge per
// line, 1-indexed, i < j, ascending.
void write_graph(std::ostream& os, const GraphSample& g);
GraphSample read_graph(std::istream& is);
void write_graph_file(const std::string& path, const GraphSample& g);
GraphSample read_graph_file(const std::string& path);

// Matrix files: header line "symmat v1 n=<n>", then the upper triangle as
// little-endian 64-bit floats in row-major pair order. Bit-exact round
// trip.
void write_matrix(std::ostream& os, const SymMatrixSample& m);
SymMatrixSample read_matrix(std::istream& is);
void write_matrix_file(const std::string& path, const SymMatrixSample& m);
SymMatrixSample read_matrix_file(const std::string& path);

// Statistic sample files: one decimal value per line.
void write_statistic_samples(const std::string& path, const std::vector<double>& values);
std::vector<double> read_statistic_samples(const std::string& path);

}  // namespace geodetect

#endif  // GEODETECT_IO_HPP_
