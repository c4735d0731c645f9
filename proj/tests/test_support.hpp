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

#ifndef MULTIPOL_TEST_SUPPORT_HPP
#define MULTIPOL_TEST_SUPPORT_HPP

#include <vector>

#include "multipol/multilinear.hpp"
#include "multipol/multipolynomial.hpp"
#include "multipol/rational.hpp"

namespace multipol::testing {

using V = Vec<Rational>;
using PtList = std::vector<V>;

inline V scalar_value(const Rational& r) {
    V v = V::Zero(1);
    v[0] = r;
    return v;
}

inline V make_point(std::initializer_list<Rational> entries) {
    V v = V::Zero(static_cast<Eigen::Index>(entries.size()));
    Eigen::Index i = 0;
    for (const auto& e : entries) v[i++] = e;
    return v;
}

/// P((x1,x2),(y1,y2)) = x1 x2 y1 y2, signature (2,2) on Q^2.
inline Multipolynomial<Rational> coordinate_product_poly() {
    Multipolynomial<Rational> P(DegreeSignature::equal(2, 2), 2, 1);
    MultiIndexMatrix key(2, 2);
    key(0, 0) = key(0, 1) = key(1, 0) = key(1, 1) = 1;
    P.set_coeff(key, scalar_value(Rational(1)));
    return P;
}

/// All sign vectors of length k as +1/-1 ints, plain odometer order.
/// Independent of the Gray-code enumeration it is used to cross-check.
inline std::vector<std::vector<int>> odometer_sign_vectors(int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(k), 1);
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0) {
            if (cur[static_cast<std::size_t>(i)] == 1) {
                cur[static_cast<std::size_t>(i)] = -1;
                break;
            }
            cur[static_cast<std::size_t>(i)] = 1;
            --i;
        }
        if (i < 0) break;
    }
    return out;
}

/// Brute-force filter over all m x d matrices with entries in [0, n]:
/// keeps those whose every row sums to n. Independent of the per-row
/// composition enumeration it cross-checks.
inline std::vector<MultiIndexMatrix> brute_force_row_sum_matrices(int m, int d, int n) {
    std::vector<MultiIndexMatrix> out;
    std::vector<int> flat(static_cast<std::size_t>(m) * static_cast<std::size_t>(d), 0);
    while (true) {
        MultiIndexMatrix cand(m, d, flat);
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) ok = cand.row_sum(i) == n;
        if (ok) out.push_back(std::move(cand));
        int i = static_cast<int>(flat.size()) - 1;
        while (i >= 0) {
            if (++flat[static_cast<std::size_t>(i)] <= n) break;
            flat[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return out;
}

/// psi(A) assembled termwise from A's coefficient tensor (test oracle,
/// independent of the grid-interpolation route in the library).
inline Multipolynomial<Rational> psi_by_bucketing(const MultilinearMap<Rational>& A, int m, int n) {
    Multipolynomial<Rational> P(DegreeSignature::equal(m, n), A.dim(), A.codim());
    for (const auto& [key, val] : A.terms()) {
        MultiIndexMatrix mat(m, A.dim());
        for (int k = 0; k < m * n; ++k) ++mat(k / n, key[static_cast<std::size_t>(k)]);
        P.add_to_coeff(mat, val);
    }
    return P;
}

}  // namespace multipol::testing

#endif  // MULTIPOL_TEST_SUPPORT_HPP
