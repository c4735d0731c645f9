/*
   Copyright 2026 The multipol authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef MULTIPOL_IO_HPP
#define MULTIPOL_IO_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "multipol/multilinear.hpp"
#include "multipol/multipolynomial.hpp"
#include "multipol/rational.hpp"

namespace multipol {

/// Parse failure with the 1-based line it occurred on.
class ParseError : public std::runtime_error {
   public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

   private:
    int line_;
};

/// Line-oriented object documents. Multilinear maps:
///
///   kind multilinear
///   m 2
///   dim 2
///   codim 1
///   terms 2
///   1 2 1/2
///   2 1 1/2
///
/// Multipolynomials carry a "degrees n_1 ... n_m" line after "m"; a term key
/// is the m x d exponent matrix flattened row-major. Keys are 1-based,
/// scalars are "p" or "p/q" in lowest terms, term lines are sorted in the
/// canonical (lexicographic) key order, and all-zero coefficients are
/// omitted, so serialize(parse(serialize(x))) is byte-identical.
std::string serialize(const MultilinearMap<Rational>& A);
std::string serialize(const Multipolynomial<Rational>& P);

using SerializedObject = std::variant<MultilinearMap<Rational>, Multipolynomial<Rational>>;

SerializedObject parse_object(std::string_view text);

/// Point files: one point per line, dim rationals separated by spaces.
std::string serialize_points(std::span<const Vec<Rational>> pts);
std::vector<Vec<Rational>> parse_points(std::string_view text, int expected_dim = -1);

/// One-line rendering of a codomain value: components separated by spaces.
std::string format_value(const Vec<Rational>& v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace multipol

#endif  // MULTIPOL_IO_HPP
