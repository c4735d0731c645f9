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

#ifndef MULTIPOL_MULTILINEAR_HPP
#define MULTIPOL_MULTILINEAR_HPP

#include <algorithm>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "multipol/combinatorics.hpp"
#include "multipol/rational.hpp"

namespace multipol {

template <class K>
K k_pow(const K& x, int e) {
    if (e < 0) throw std::invalid_argument("k_pow: negative exponent");
    K r(1);
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

template <class K>
K k_factorial(int n) {
    if (n < 0) throw std::invalid_argument("k_factorial: negative argument");
    K f(1);
    for (int i = 2; i <= n; ++i) f *= K(i);
    return f;
}

template <class K>
K k_factorial(const MultiIndex& alpha) {
    K f(1);
    for (int v : alpha.entries()) f *= k_factorial<K>(v);
    return f;
}

/// m-linear map A : (K^d)^m -> K^dF stored as a sparse coefficient tensor:
/// the value at key (j_1,...,j_m) is A(e_{j_1},...,e_{j_m}). Absent keys are
/// zero; exact zeros are never stored, so maps compare coefficientwise.
template <class K>
class MultilinearMap {
   public:
    using Key = std::vector<int>;

    MultilinearMap(int arity, int dim, int codim) : m_(arity), d_(dim), dF_(codim) {
        if (arity < 1 || dim < 1 || codim < 1)
            throw std::invalid_argument("MultilinearMap: arity, dim and codim must be positive");
    }

    int arity() const { return m_; }
    int dim() const { return d_; }
    int codim() const { return dF_; }
    const std::map<Key, Vec<K>>& terms() const { return terms_; }
    Vec<K> zero_value() const { return Vec<K>::Zero(dF_); }

    Vec<K> coeff(const Key& key) const {
        check_key(key);
        const auto it = terms_.find(key);
        return it == terms_.end() ? zero_value() : it->second;
    }

    void set_coeff(const Key& key, Vec<K> value) {
        check_key(key);
        check_value(value);
        if (is_zero_vec(value))
            terms_.erase(key);
        else
            terms_.insert_or_assign(key, std::move(value));
    }

    void add_to_coeff(const Key& key, const Vec<K>& value) {
        check_key(key);
        check_value(value);
        auto [it, inserted] = terms_.try_emplace(key, value);
        if (!inserted) it->second += value;
        if (is_zero_vec(it->second)) terms_.erase(it);
    }

    friend bool operator==(const MultilinearMap& a, const MultilinearMap& b) {
        if (a.m_ != b.m_ || a.d_ != b.d_ || a.dF_ != b.dF_) return false;
        if (a.terms_.size() != b.terms_.size()) return false;
        auto ib = b.terms_.begin();
        for (const auto& [key, val] : a.terms_) {
            if (key != ib->first || !vec_equal(val, ib->second)) return false;
            ++ib;
        }
        return true;
    }

   private:
    void check_key(const Key& key) const {
        if (static_cast<int>(key.size()) != m_)
            throw std::invalid_argument("MultilinearMap: key length differs from arity");
        for (int j : key)
            if (j < 0 || j >= d_) throw std::invalid_argument("MultilinearMap: key entry out of range");
    }
    void check_value(const Vec<K>& v) const {
        if (v.size() != dF_) throw std::invalid_argument("MultilinearMap: value has wrong codomain dimension");
    }

    int m_, d_, dF_;
    std::map<Key, Vec<K>> terms_;
};

/// m-homogeneous polynomial P : K^d -> K^dF in the monomial representation
/// P = sum c_alpha x^alpha over multi-indices alpha with |alpha| = m.
template <class K>
class HomogeneousPolynomial {
   public:
    HomogeneousPolynomial(int degree, int dim, int codim) : m_(degree), d_(dim), dF_(codim) {
        if (degree < 1 || dim < 1 || codim < 1)
            throw std::invalid_argument("HomogeneousPolynomial: degree, dim and codim must be positive");
    }

    int degree() const { return m_; }
    int dim() const { return d_; }
    int codim() const { return dF_; }
    const std::map<MultiIndex, Vec<K>>& terms() const { return terms_; }
    Vec<K> zero_value() const { return Vec<K>::Zero(dF_); }

    Vec<K> coeff(const MultiIndex& alpha) const {
        check_key(alpha);
        const auto it = terms_.find(alpha);
        return it == terms_.end() ? zero_value() : it->second;
    }

    void set_coeff(const MultiIndex& alpha, Vec<K> value) {
        check_key(alpha);
        check_value(value);
        if (is_zero_vec(value))
            terms_.erase(alpha);
        else
            terms_.insert_or_assign(alpha, std::move(value));
    }

    void add_to_coeff(const MultiIndex& alpha, const Vec<K>& value) {
        check_key(alpha);
        check_value(value);
        auto [it, inserted] = terms_.try_emplace(alpha, value);
        if (!inserted) it->second += value;
        if (is_zero_vec(it->second)) terms_.erase(it);
    }

    friend bool operator==(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
        if (a.m_ != b.m_ || a.d_ != b.d_ || a.dF_ != b.dF_) return false;
        if (a.terms_.size() != b.terms_.size()) return false;
        auto ib = b.terms_.begin();
        for (const auto& [key, val] : a.terms_) {
            if (key != ib->first || !vec_equal(val, ib->second)) return false;
            ++ib;
        }
        return true;
    }

   private:
    void check_key(const MultiIndex& alpha) const {
        if (alpha.size() != d_)
            throw std::invalid_argument("HomogeneousPolynomial: multi-index length differs from dim");
        if (alpha.norm() != m_)
            throw std::invalid_argument("HomogeneousPolynomial: |alpha| differs from the degree");
    }
    void check_value(const Vec<K>& v) const {
        if (v.size() != dF_)
            throw std::invalid_argument("HomogeneousPolynomial: value has wrong codomain dimension");
    }

    int m_, d_, dF_;
    std::map<MultiIndex, Vec<K>> terms_;
};

namespace detail {

template <class K>
void check_points(std::span<const Vec<K>> pts, int expected_count, int dim, const char* who) {
    if (static_cast<int>(pts.size()) != expected_count)
        throw std::invalid_argument(std::string(who) + ": wrong number of points");
    for (const auto& p : pts)
        if (p.size() != dim) throw std::invalid_argument(std::string(who) + ": point dimension mismatch");
}

}  // namespace detail

/// A(x_1,...,x_m), exact.
template <class K>
Vec<K> eval(const MultilinearMap<K>& A, std::span<const Vec<K>> pts) {
    detail::check_points<K>(pts, A.arity(), A.dim(), "eval");
    Vec<K> out = A.zero_value();
    for (const auto& [key, val] : A.terms()) {
        K f(1);
        for (int k = 0; k < A.arity(); ++k) f *= pts[static_cast<std::size_t>(k)][key[static_cast<std::size_t>(k)]];
        out += val * f;
    }
    return out;
}

/// A x_1^{a_1} ... x_n^{a_n}: evaluation with x_k repeated a_k times, in order.
template <class K>
Vec<K> power_eval(const MultilinearMap<K>& A, std::span<const Vec<K>> pts, const MultiIndex& alpha) {
    if (alpha.norm() != A.arity()) throw std::invalid_argument("power_eval: |alpha| differs from arity");
    if (pts.size() != static_cast<std::size_t>(alpha.size()))
        throw std::invalid_argument("power_eval: point count differs from multi-index length");
    std::vector<Vec<K>> expanded;
    expanded.reserve(static_cast<std::size_t>(A.arity()));
    for (int k = 0; k < alpha.size(); ++k)
        for (int r = 0; r < alpha[k]; ++r) expanded.push_back(pts[static_cast<std::size_t>(k)]);
    return eval(A, std::span<const Vec<K>>(expanded));
}

/// Symmetrization A^s: the average of A over all argument permutations.
template <class K>
MultilinearMap<K> symmetrize(const MultilinearMap<K>& A) {
    const auto perms = all_permutations(A.arity());
    const K weight = K(1) / k_factorial<K>(A.arity());
    MultilinearMap<K> out(A.arity(), A.dim(), A.codim());
    std::vector<int> permuted(static_cast<std::size_t>(A.arity()));
    for (const auto& [key, val] : A.terms()) {
        const Vec<K> share = val * weight;
        for (const auto& p : perms) {
            for (int k = 0; k < A.arity(); ++k)
                permuted[static_cast<std::size_t>(k)] = key[static_cast<std::size_t>(p[static_cast<std::size_t>(k)])];
            out.add_to_coeff(permuted, share);
        }
    }
    return out;
}

/// True iff the coefficient tensor is invariant under every permutation of
/// the index tuple.
template <class K>
bool is_symmetric(const MultilinearMap<K>& A) {
    if (A.arity() == 1) return true;
    const auto perms = all_permutations(A.arity());
    std::vector<int> permuted(static_cast<std::size_t>(A.arity()));
    for (const auto& [key, val] : A.terms()) {
        for (const auto& p : perms) {
            for (int k = 0; k < A.arity(); ++k)
                permuted[static_cast<std::size_t>(k)] = key[static_cast<std::size_t>(p[static_cast<std::size_t>(k)])];
            if (!vec_equal(A.coeff(permuted), val)) return false;
        }
    }
    return true;
}

/// Diagonal restriction: the m-homogeneous polynomial x -> A(x,...,x).
template <class K>
HomogeneousPolynomial<K> hat(const MultilinearMap<K>& A) {
    HomogeneousPolynomial<K> P(A.arity(), A.dim(), A.codim());
    std::vector<int> profile(static_cast<std::size_t>(A.dim()));
    for (const auto& [key, val] : A.terms()) {
        std::fill(profile.begin(), profile.end(), 0);
        for (int j : key) ++profile[static_cast<std::size_t>(j)];
        P.add_to_coeff(MultiIndex(profile), val);
    }
    return P;
}

/// P(x), exact.
template <class K>
Vec<K> eval(const HomogeneousPolynomial<K>& P, const Vec<K>& x) {
    if (x.size() != P.dim()) throw std::invalid_argument("eval: point dimension mismatch");
    Vec<K> out = P.zero_value();
    for (const auto& [alpha, val] : P.terms()) {
        K f(1);
        for (int j = 0; j < alpha.size(); ++j) f *= k_pow(x[j], alpha[j]);
        out += val * f;
    }
    return out;
}

/// The polarization sign sum
///   (1/(m! 2^m)) sum over eps in {+1,-1}^m of eps_1...eps_m P(x0 + sum eps_k x_k),
/// the value at (x_1,...,x_m) of the symmetric m-linear map with diagonal P.
template <class K>
Vec<K> polarization_value(const HomogeneousPolynomial<K>& P, const Vec<K>& x0, std::span<const Vec<K>> pts,
                          std::uint64_t max_signs = kDefaultMaxSigns) {
    const int m = P.degree();
    detail::check_points<K>(pts, m, P.dim(), "polarization_value");
    if (x0.size() != P.dim()) throw std::invalid_argument("polarization_value: x0 dimension mismatch");
    check_sign_enumeration(m, max_signs);

    Vec<K> y = x0;
    for (const auto& p : pts) y += p;
    Vec<K> acc = P.zero_value();
    GrayWalker walk(m);
    while (!walk.done()) {
        if (walk.sign_product() < 0)
            acc -= eval(P, y);
        else
            acc += eval(P, y);
        const int b = walk.step();
        if (b >= 0) y += pts[static_cast<std::size_t>(b)] * K(2 * walk.signs()[b]);
    }
    return acc * (K(1) / (k_factorial<K>(m) * k_pow(K(2), m)));
}

/// The unique symmetric m-linear map whose diagonal restriction is P,
/// computed by evaluating the polarization sign sum at canonical basis
/// tuples. The result does not depend on x0.
template <class K>
MultilinearMap<K> polarize(const HomogeneousPolynomial<K>& P, const Vec<K>& x0,
                           std::uint64_t max_signs = kDefaultMaxSigns) {
    const int m = P.degree();
    const int d = P.dim();
    MultilinearMap<K> A(m, d, P.codim());

    std::vector<Vec<K>> basis_pts;
    basis_pts.reserve(static_cast<std::size_t>(m));
    std::vector<int> tuple(static_cast<std::size_t>(m), 0);
    // sorted tuples (multisets); each distinct permutation shares the value
    const auto rec = [&](auto&& self, int pos, int lo) -> void {
        if (pos == m) {
            basis_pts.clear();
            for (int j : tuple) basis_pts.push_back(basis_vec<K>(d, j));
            const Vec<K> value = polarization_value(P, x0, std::span<const Vec<K>>(basis_pts), max_signs);
            if (is_zero_vec(value)) return;
            std::vector<int> perm = tuple;
            do {
                A.set_coeff(perm, value);
            } while (std::next_permutation(perm.begin(), perm.end()));
            return;
        }
        for (int j = lo; j < d; ++j) {
            tuple[static_cast<std::size_t>(pos)] = j;
            self(self, pos + 1, j);
        }
    };
    rec(rec, 0, 0);
    return A;
}

template <class K>
MultilinearMap<K> polarize(const HomogeneousPolynomial<K>& P, std::uint64_t max_signs = kDefaultMaxSigns) {
    return polarize(P, Vec<K>(Vec<K>::Zero(P.dim())), max_signs);
}

/// Both sides of the Leibniz expansion
///   A(x_1+...+x_n)^m = sum_{|alpha|=m} (m!/alpha!) A x_1^{a_1}...x_n^{a_n},
/// computed independently for exact comparison by the caller.
template <class K>
std::pair<Vec<K>, Vec<K>> verify_leibniz(const MultilinearMap<K>& A, std::span<const Vec<K>> pts) {
    if (!is_symmetric(A)) throw std::domain_error("verify_leibniz: map is not symmetric");
    if (pts.empty()) throw std::invalid_argument("verify_leibniz: needs at least one point");
    for (const auto& p : pts)
        if (p.size() != A.dim()) throw std::invalid_argument("verify_leibniz: point dimension mismatch");

    const int m = A.arity();
    const int n = static_cast<int>(pts.size());

    Vec<K> s = Vec<K>::Zero(A.dim());
    for (const auto& p : pts) s += p;
    const std::vector<Vec<K>> single{s};
    const Vec<K> left = power_eval(A, std::span<const Vec<K>>(single), MultiIndex(std::vector<int>{m}));

    const K m_fact = k_factorial<K>(m);
    Vec<K> right = A.zero_value();
    for (const auto& alpha : enumerate_compositions(m, n)) {
        const K weight = m_fact / k_factorial<K>(alpha);
        right += power_eval(A, pts, alpha) * weight;
    }
    return {left, right};
}

template <class K>
MultilinearMap<K> operator+(const MultilinearMap<K>& a, const MultilinearMap<K>& b) {
    if (a.arity() != b.arity() || a.dim() != b.dim() || a.codim() != b.codim())
        throw std::invalid_argument("MultilinearMap: shape mismatch in +");
    MultilinearMap<K> out = a;
    for (const auto& [key, val] : b.terms()) out.add_to_coeff(key, val);
    return out;
}

template <class K>
MultilinearMap<K> operator*(const K& c, const MultilinearMap<K>& a) {
    MultilinearMap<K> out(a.arity(), a.dim(), a.codim());
    for (const auto& [key, val] : a.terms()) out.set_coeff(key, Vec<K>(val * c));
    return out;
}

template <class K>
HomogeneousPolynomial<K> operator+(const HomogeneousPolynomial<K>& a, const HomogeneousPolynomial<K>& b) {
    if (a.degree() != b.degree() || a.dim() != b.dim() || a.codim() != b.codim())
        throw std::invalid_argument("HomogeneousPolynomial: shape mismatch in +");
    HomogeneousPolynomial<K> out = a;
    for (const auto& [key, val] : b.terms()) out.add_to_coeff(key, val);
    return out;
}

template <class K>
HomogeneousPolynomial<K> operator*(const K& c, const HomogeneousPolynomial<K>& a) {
    HomogeneousPolynomial<K> out(a.degree(), a.dim(), a.codim());
    for (const auto& [key, val] : a.terms()) out.set_coeff(key, Vec<K>(val * c));
    return out;
}

}  // namespace multipol

#endif  // MULTIPOL_MULTILINEAR_HPP
