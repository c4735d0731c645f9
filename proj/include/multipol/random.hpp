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

#ifndef MULTIPOL_RANDOM_HPP
#define MULTIPOL_RANDOM_HPP

#include <cstdint>
#include <random>

#include "multipol/multilinear.hpp"
#include "multipol/multipolynomial.hpp"
#include "multipol/rational.hpp"

namespace multipol {

/// Deterministic instance generation. Identical configs produce identical
/// objects on every platform: the generator is mt19937_64 and the mappings
/// below avoid std::uniform_*_distribution, whose output is
/// implementation-defined.
struct GeneratorConfig {
    std::uint64_t seed = 1;
    int numerator_lo = -9;  // coefficient pool: numerator in [lo, hi]
    int numerator_hi = 9;
    int denominator_hi = 9;  // denominator in [1, hi]
    double sparsity = 1.0;   // fraction of candidate keys populated
};

class Rng {
   public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}

    std::uint64_t next() { return g_(); }

    /// Uniform in [lo, hi] by 64-bit modulo (bias negligible and, more to
    /// the point, identical everywhere).
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    /// 53-bit mantissa in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1p-53; }

   private:
    std::mt19937_64 g_;
};

/// Seed for trial `t` of a run seeded with `seed`.
inline std::uint64_t trial_seed(std::uint64_t seed, int t) {
    return seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(t) + 1));
}

Rational random_rational(Rng& rng, const GeneratorConfig& cfg);
Vec<Rational> random_point(Rng& rng, int dim, const GeneratorConfig& cfg);

/// Deterministic sparse random m-linear map; when `symmetric`, the result is
/// the symmetrization of the drawn map (exactly symmetric).
MultilinearMap<Rational> random_multilinear(const GeneratorConfig& cfg, int m, int d, int dF, bool symmetric);

/// Deterministic sparse random homogeneous polynomial of the given degree.
HomogeneousPolynomial<Rational> random_homogeneous(const GeneratorConfig& cfg, int degree, int d, int dF);

/// Deterministic sparse random multipolynomial. `symmetric` averages the
/// terms over row permutations and requires an equal-degrees signature
/// (mixed symmetric spaces contain only the zero map); mixed signatures
/// with `symmetric` are rejected with std::domain_error.
Multipolynomial<Rational> random_multipolynomial(const GeneratorConfig& cfg, const DegreeSignature& sig, int d,
                                                 int dF, bool symmetric);

}  // namespace multipol

#endif  // MULTIPOL_RANDOM_HPP
