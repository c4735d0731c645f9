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

#include "multipol/random.hpp"

#include <stdexcept>

namespace multipol {

Rational random_rational(Rng& rng, const GeneratorConfig& cfg) {
    const int num = rng.uniform_int(cfg.numerator_lo, cfg.numerator_hi);
    const int den = rng.uniform_int(1, cfg.denominator_hi);
    return Rational(num, den);
}

Vec<Rational> random_point(Rng& rng, int dim, const GeneratorConfig& cfg) {
    Vec<Rational> p = Vec<Rational>::Zero(dim);
    for (int c = 0; c < dim; ++c) p[c] = random_rational(rng, cfg);
    return p;
}

namespace {

Vec<Rational> draw_value(Rng& rng, const GeneratorConfig& cfg, int dF) {
    Vec<Rational> v = Vec<Rational>::Zero(dF);
    for (int c = 0; c < dF; ++c) v[c] = random_rational(rng, cfg);
    return v;
}

}  // namespace

MultilinearMap<Rational> random_multilinear(const GeneratorConfig& cfg, int m, int d, int dF, bool symmetric) {
    Rng rng(cfg.seed);
    MultilinearMap<Rational> A(m, d, dF);
    std::vector<int> key(static_cast<std::size_t>(m), 0);
    // lexicographic odometer over all d^m keys; one inclusion draw per key
    while (true) {
        if (rng.unit() < cfg.sparsity) A.set_coeff(key, draw_value(rng, cfg, dF));
        int k = m - 1;
        while (k >= 0) {
            if (++key[static_cast<std::size_t>(k)] < d) break;
            key[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return symmetric ? symmetrize(A) : A;
}

HomogeneousPolynomial<Rational> random_homogeneous(const GeneratorConfig& cfg, int degree, int d, int dF) {
    Rng rng(cfg.seed);
    HomogeneousPolynomial<Rational> P(degree, d, dF);
    for (const auto& alpha : enumerate_compositions(degree, d))
        if (rng.unit() < cfg.sparsity) P.set_coeff(alpha, draw_value(rng, cfg, dF));
    return P;
}

Multipolynomial<Rational> random_multipolynomial(const GeneratorConfig& cfg, const DegreeSignature& sig, int d,
                                                 int dF, bool symmetric) {
    if (symmetric && !sig.equal_degrees())
        throw std::domain_error("random_multipolynomial: symmetric requires an equal-degrees signature");
    Rng rng(cfg.seed);
    Multipolynomial<Rational> P(sig, d, dF);
    for (const auto& key : enumerate_signature_matrices(sig.degrees(), d))
        if (rng.unit() < cfg.sparsity) P.set_coeff(key, draw_value(rng, cfg, dF));
    if (!symmetric) return P;

    const auto perms = all_permutations(sig.slots());
    const Rational w = Rational(1) / factorial_scalar(sig.slots());
    Multipolynomial<Rational> S(sig, d, dF);
    for (const auto& [key, val] : P.terms()) {
        const Vec<Rational> share = val * w;
        for (const auto& p : perms) S.add_to_coeff(key.permute_rows(p), share);
    }
    return S;
}

}  // namespace multipol
