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

#ifndef MULTIPOL_MULTIPOLYNOMIAL_HPP
#define MULTIPOL_MULTIPOLYNOMIAL_HPP

#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "multipol/combinatorics.hpp"
#include "multipol/multilinear.hpp"
#include "multipol/rational.hpp"

namespace multipol {

/// Per-slot homogeneity degrees (n_1,...,n_m).
class DegreeSignature {
   public:
    explicit DegreeSignature(std::vector<int> degrees) : n_(std::move(degrees)) {
        if (n_.empty()) throw std::invalid_argument("DegreeSignature: needs at least one slot");
        for (int n : n_)
            if (n < 1) throw std::invalid_argument("DegreeSignature: degrees must be positive");
    }
    static DegreeSignature equal(int m, int n) {
        if (m < 1) throw std::invalid_argument("DegreeSignature: m must be positive");
        return DegreeSignature(std::vector<int>(static_cast<std::size_t>(m), n));
    }

    int slots() const { return static_cast<int>(n_.size()); }
    int degree(int j) const { return n_.at(static_cast<std::size_t>(j)); }
    std::span<const int> degrees() const { return n_; }

    /// M = n_1 + ... + n_m.
    int total() const {
        int t = 0;
        for (int n : n_) t += n;
        return t;
    }
    bool equal_degrees() const {
        for (int n : n_)
            if (n != n_.front()) return false;
        return true;
    }
    int max_degree() const {
        int b = 0;
        for (int n : n_) b = std::max(b, n);
        return b;
    }
    /// Offsets of the per-slot blocks inside 1..M: slot j owns positions
    /// offset(j) .. offset(j)+n_j-1 (0-based).
    std::vector<int> block_offsets() const {
        std::vector<int> o(n_.size(), 0);
        for (std::size_t j = 1; j < n_.size(); ++j) o[j] = o[j - 1] + n_[j - 1];
        return o;
    }

    friend auto operator<=>(const DegreeSignature&, const DegreeSignature&) = default;

   private:
    std::vector<int> n_;
};

/// (n_1,...,n_m)-homogeneous polynomial P : (K^d)^m -> K^dF in the monomial
/// representation: a term keyed by an m x d exponent matrix (row i sums to
/// n_i) contributes c * prod_{i,j} x_i[j]^{alpha_ij}.
template <class K>
class Multipolynomial {
   public:
    Multipolynomial(DegreeSignature signature, int dim, int codim)
        : sig_(std::move(signature)), d_(dim), dF_(codim) {
        if (dim < 1 || codim < 1)
            throw std::invalid_argument("Multipolynomial: dim and codim must be positive");
    }

    const DegreeSignature& signature() const { return sig_; }
    int slots() const { return sig_.slots(); }
    int dim() const { return d_; }
    int codim() const { return dF_; }
    const std::map<MultiIndexMatrix, Vec<K>>& terms() const { return terms_; }
    Vec<K> zero_value() const { return Vec<K>::Zero(dF_); }

    Vec<K> coeff(const MultiIndexMatrix& key) const {
        check_key(key);
        const auto it = terms_.find(key);
        return it == terms_.end() ? zero_value() : it->second;
    }

    void set_coeff(const MultiIndexMatrix& key, Vec<K> value) {
        check_key(key);
        check_value(value);
        if (is_zero_vec(value))
            terms_.erase(key);
        else
            terms_.insert_or_assign(key, std::move(value));
    }

    void add_to_coeff(const MultiIndexMatrix& key, const Vec<K>& value) {
        check_key(key);
        check_value(value);
        auto [it, inserted] = terms_.try_emplace(key, value);
        if (!inserted) it->second += value;
        if (is_zero_vec(it->second)) terms_.erase(it);
    }

    bool is_zero() const { return terms_.empty(); }

    friend bool operator==(const Multipolynomial& a, const Multipolynomial& b) {
        if (a.sig_ != b.sig_ || a.d_ != b.d_ || a.dF_ != b.dF_) return false;
        if (a.terms_.size() != b.terms_.size()) return false;
        auto ib = b.terms_.begin();
        for (const auto& [key, val] : a.terms_) {
            if (key != ib->first || !vec_equal(val, ib->second)) return false;
            ++ib;
        }
        return true;
    }

   private:
    void check_key(const MultiIndexMatrix& key) const {
        if (key.rows() != sig_.slots() || key.cols() != d_)
            throw std::invalid_argument("Multipolynomial: key shape mismatch");
        for (int i = 0; i < key.rows(); ++i)
            if (key.row_sum(i) != sig_.degree(i))
                throw std::invalid_argument("Multipolynomial: row sum differs from the signature");
    }
    void check_value(const Vec<K>& v) const {
        if (v.size() != dF_)
            throw std::invalid_argument("Multipolynomial: value has wrong codomain dimension");
    }

    DegreeSignature sig_;
    int d_, dF_;
    std::map<MultiIndexMatrix, Vec<K>> terms_;
};

template <class K>
K k_factorial(const MultiIndexMatrix& alpha) {
    K f(1);
    for (int v : alpha.entries()) f *= k_factorial<K>(v);
    return f;
}

namespace detail {

template <class K>
void require_equal_signature(const Multipolynomial<K>& P, const char* who) {
    if (!P.signature().equal_degrees())
        throw std::domain_error(std::string(who) + ": requires an equal-degrees signature");
}

}  // namespace detail

/// P(x_1,...,x_m), exact.
template <class K>
Vec<K> eval(const Multipolynomial<K>& P, std::span<const Vec<K>> pts) {
    detail::check_points<K>(pts, P.slots(), P.dim(), "eval");
    Vec<K> out = P.zero_value();
    for (const auto& [key, val] : P.terms()) {
        K f(1);
        for (int i = 0; i < key.rows(); ++i)
            for (int j = 0; j < key.cols(); ++j) f *= k_pow(pts[static_cast<std::size_t>(i)][j], key(i, j));
        out += val * f;
    }
    return out;
}

/// P(x,...,x) for an equal-degrees signature.
template <class K>
Vec<K> diag_eval(const Multipolynomial<K>& P, const Vec<K>& x) {
    detail::require_equal_signature(P, "diag_eval");
    if (x.size() != P.dim()) throw std::invalid_argument("diag_eval: point dimension mismatch");
    Vec<K> out = P.zero_value();
    for (const auto& [key, val] : P.terms()) {
        K f(1);
        for (int j = 0; j < key.cols(); ++j) f *= k_pow(x[j], key.col_sum(j));
        out += val * f;
    }
    return out;
}

/// The n_j-homogeneous polynomial in slot j obtained by fixing the other
/// m-1 arguments (exact partial evaluation of the terms).
template <class K>
HomogeneousPolynomial<K> slot_polynomial(const Multipolynomial<K>& P, int j, std::span<const Vec<K>> fixed) {
    const int m = P.slots();
    if (j < 0 || j >= m) throw std::invalid_argument("slot_polynomial: slot index out of range");
    detail::check_points<K>(fixed, m - 1, P.dim(), "slot_polynomial");

    HomogeneousPolynomial<K> Q(P.signature().degree(j), P.dim(), P.codim());
    for (const auto& [key, val] : P.terms()) {
        K f(1);
        for (int i = 0; i < m; ++i) {
            if (i == j) continue;
            const auto& p = fixed[static_cast<std::size_t>(i < j ? i : i - 1)];
            for (int c = 0; c < key.cols(); ++c) f *= k_pow(p[c], key(i, c));
        }
        if (f == K(0)) continue;
        Q.add_to_coeff(key.row(j), val * f);
    }
    return Q;
}

namespace detail {

/// sum over eps in {+1,-1}^{mn} of eps_1...eps_{mn} P(u_1,...,u_m) where
/// u_i = sum_j eps_ij(alpha, eps) * col_points[j]; the eps_ij chunks are the
/// contiguous per-entry blocks of row i's n signs.
template <class K>
Vec<K> signed_sum_over_matrix(const Multipolynomial<K>& P, const MultiIndexMatrix& alpha,
                              std::span<const Vec<K>> col_points, int n, std::uint64_t max_signs) {
    const int m = alpha.rows();
    const int bits = m * n;
    check_sign_enumeration(bits, max_signs);

    // position -> (row, column) of the chunk that owns it
    std::vector<std::pair<int, int>> owner(static_cast<std::size_t>(bits), {-1, -1});
    for (int i = 0; i < m; ++i) {
        int pos = i * n;
        for (int j = 0; j < alpha.cols(); ++j)
            for (int t = 0; t < alpha(i, j); ++t) owner[static_cast<std::size_t>(pos++)] = {i, j};
        if (pos != (i + 1) * n) throw std::invalid_argument("signed_sum_over_matrix: row sum differs from n");
    }

    // all signs +1: eps_ij = alpha_ij
    std::vector<Vec<K>> u(static_cast<std::size_t>(m), Vec<K>(Vec<K>::Zero(P.dim())));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < alpha.cols(); ++j)
            if (alpha(i, j) != 0) u[static_cast<std::size_t>(i)] += col_points[static_cast<std::size_t>(j)] * K(alpha(i, j));

    Vec<K> acc = P.zero_value();
    GrayWalker walk(bits);
    while (!walk.done()) {
        if (walk.sign_product() < 0)
            acc -= eval(P, std::span<const Vec<K>>(u));
        else
            acc += eval(P, std::span<const Vec<K>>(u));
        const int b = walk.step();
        if (b >= 0) {
            const auto [i, j] = owner[static_cast<std::size_t>(b)];
            u[static_cast<std::size_t>(i)] += col_points[static_cast<std::size_t>(j)] * K(2 * walk.signs()[b]);
        }
    }
    return acc;
}

}  // namespace detail

/// Both sides of the combined Leibniz/polarization expansion for an
/// equal-degrees P: the left side is P(sum_j lambda_j x_j)^m, the right side
/// the double sum over row-sum matrices and sign vectors, with the
/// column-sum lambda powers and weight 1/(2^{mn} alpha_1!...alpha_m!).
template <class K>
std::pair<Vec<K>, Vec<K>> expand_combination(const Multipolynomial<K>& P, std::span<const Vec<K>> pts,
                                             std::span<const K> lambdas,
                                             std::uint64_t max_signs = kDefaultMaxSigns) {
    detail::require_equal_signature(P, "expand_combination");
    if (pts.empty() || pts.size() != lambdas.size())
        throw std::invalid_argument("expand_combination: points and lambdas must match and be nonempty");
    for (const auto& p : pts)
        if (p.size() != P.dim()) throw std::invalid_argument("expand_combination: point dimension mismatch");

    const int m = P.slots();
    const int n = P.signature().degree(0);
    const int dpts = static_cast<int>(pts.size());

    Vec<K> y = Vec<K>::Zero(P.dim());
    for (int j = 0; j < dpts; ++j) y += pts[static_cast<std::size_t>(j)] * lambdas[static_cast<std::size_t>(j)];
    const Vec<K> left = diag_eval(P, y);

    Vec<K> acc = P.zero_value();
    for (const auto& alpha : enumerate_row_sum_matrices(m, dpts, n)) {
        K factor(1);
        for (int j = 0; j < dpts; ++j) factor *= k_pow(lambdas[static_cast<std::size_t>(j)], alpha.col_sum(j));
        if (factor == K(0)) continue;
        factor /= k_factorial<K>(alpha);
        acc += detail::signed_sum_over_matrix(P, alpha, pts, n, max_signs) * factor;
    }
    const Vec<K> right = acc * (K(1) / k_pow(K(2), m * n));
    return {left, right};
}

/// The remainder function: the sum over matrices in M\D of the signed sum,
/// each weighted by 1/(alpha_1!...alpha_m!).
template <class K>
Vec<K> remainder(const Multipolynomial<K>& P, std::span<const Vec<K>> pts,
                 std::uint64_t max_signs = kDefaultMaxSigns) {
    detail::require_equal_signature(P, "remainder");
    detail::check_points<K>(pts, P.slots(), P.dim(), "remainder");

    const int m = P.slots();
    const int n = P.signature().degree(0);

    // column 0 is the vacuous x0 slot of the matrix set; it carries no signs
    std::vector<Vec<K>> col_points;
    col_points.reserve(static_cast<std::size_t>(m) + 1);
    col_points.push_back(Vec<K>::Zero(P.dim()));
    for (const auto& p : pts) col_points.push_back(p);

    Vec<K> acc = P.zero_value();
    for (const auto& alpha : matrix_sets_M_and_D(m, n).off_diagonal()) {
        const K weight = K(1) / k_factorial<K>(alpha);
        acc += detail::signed_sum_over_matrix(P, alpha, std::span<const Vec<K>>(col_points), n, max_signs) * weight;
    }
    return acc;
}

/// The sign sum
///   sum over eps in {+1,-1}^{mn} of eps_1...eps_{mn}
///     P(x0 + sum_{k<=n} eps_k x_1 + ... + sum_{k<=n} eps_{(m-1)n+k} x_m)^m.
/// Shared kernel of the multipolynomial and entire polarization formulas;
/// its value does not depend on x0.
template <class K>
Vec<K> diagonal_sign_sum(const Multipolynomial<K>& P, const Vec<K>& x0, std::span<const Vec<K>> pts,
                         std::uint64_t max_signs = kDefaultMaxSigns) {
    detail::require_equal_signature(P, "diagonal_sign_sum");
    detail::check_points<K>(pts, P.slots(), P.dim(), "diagonal_sign_sum");
    if (x0.size() != P.dim()) throw std::invalid_argument("diagonal_sign_sum: x0 dimension mismatch");

    const int m = P.slots();
    const int n = P.signature().degree(0);
    const int bits = m * n;
    check_sign_enumeration(bits, max_signs);

    Vec<K> y = x0;
    for (const auto& p : pts) y += p * K(n);

    Vec<K> acc = P.zero_value();
    GrayWalker walk(bits);
    while (!walk.done()) {
        if (walk.sign_product() < 0)
            acc -= diag_eval(P, y);
        else
            acc += diag_eval(P, y);
        const int b = walk.step();
        if (b >= 0) y += pts[static_cast<std::size_t>(b / n)] * K(2 * walk.signs()[b]);
    }
    return acc;
}

/// diagonal_sign_sum with the argument vector rebuilt from scratch for every
/// sign vector (reference kernel; same Gray enumeration order).
template <class K>
Vec<K> diagonal_sign_sum_naive(const Multipolynomial<K>& P, const Vec<K>& x0, std::span<const Vec<K>> pts,
                               std::uint64_t max_signs = kDefaultMaxSigns) {
    detail::require_equal_signature(P, "diagonal_sign_sum_naive");
    detail::check_points<K>(pts, P.slots(), P.dim(), "diagonal_sign_sum_naive");
    const int n = P.signature().degree(0);
    const int bits = P.slots() * n;
    check_sign_enumeration(bits, max_signs);

    Vec<K> acc = P.zero_value();
    const std::uint64_t total = std::uint64_t{1} << bits;
    for (std::uint64_t rank = 0; rank < total; ++rank) {
        const SignVector s = SignVector::at_gray_rank(bits, rank);
        Vec<K> y = x0;
        for (int k = 0; k < bits; ++k) y += pts[static_cast<std::size_t>(k / n)] * K(s[k]);
        if (s.product() < 0)
            acc -= diag_eval(P, y);
        else
            acc += diag_eval(P, y);
    }
    return acc;
}

/// diagonal_sign_sum with the Gray walk partitioned over `threads` disjoint
/// rank ranges, reduced exactly.
template <class K>
Vec<K> diagonal_sign_sum_partitioned(const Multipolynomial<K>& P, const Vec<K>& x0, std::span<const Vec<K>> pts,
                                     int threads, std::uint64_t max_signs = kDefaultMaxSigns) {
    detail::require_equal_signature(P, "diagonal_sign_sum_partitioned");
    detail::check_points<K>(pts, P.slots(), P.dim(), "diagonal_sign_sum_partitioned");
    if (threads < 1) throw std::invalid_argument("diagonal_sign_sum_partitioned: threads must be positive");
    const int n = P.signature().degree(0);
    const int bits = P.slots() * n;
    check_sign_enumeration(bits, max_signs);

    const std::uint64_t total = std::uint64_t{1} << bits;
    const int used = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), total));
    std::vector<Vec<K>> partial(static_cast<std::size_t>(used), P.zero_value());
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(used));
    for (int w = 0; w < used; ++w) {
        const std::uint64_t first = total * static_cast<std::uint64_t>(w) / static_cast<std::uint64_t>(used);
        const std::uint64_t last = total * (static_cast<std::uint64_t>(w) + 1) / static_cast<std::uint64_t>(used);
        pool.emplace_back([&, w, first, last] {
            GrayWalker walk(bits, first, last);
            Vec<K> y = x0;
            for (int k = 0; k < bits; ++k) y += pts[static_cast<std::size_t>(k / n)] * K(walk.signs()[k]);
            Vec<K> acc = P.zero_value();
            while (!walk.done()) {
                if (walk.sign_product() < 0)
                    acc -= diag_eval(P, y);
                else
                    acc += diag_eval(P, y);
                const int b = walk.step();
                if (b >= 0) y += pts[static_cast<std::size_t>(b / n)] * K(2 * walk.signs()[b]);
            }
            partial[static_cast<std::size_t>(w)] = std::move(acc);
        });
    }
    for (auto& t : pool) t.join();
    Vec<K> acc = P.zero_value();
    for (const auto& part : partial) acc += part;
    return acc;
}

/// The multipolynomial polarization value
///   (1/(m!(n!2^n)^m)) * diagonal sign sum  -  (1/(m!2^{mn})) * remainder.
/// Equals P(x_1,...,x_m) whenever P is symmetric; never depends on x0.
template <class K>
Vec<K> multipolarize(const Multipolynomial<K>& P, const Vec<K>& x0, std::span<const Vec<K>> pts,
                     std::uint64_t max_signs = kDefaultMaxSigns) {
    detail::require_equal_signature(P, "multipolarize");
    const int m = P.slots();
    const int n = P.signature().degree(0);

    const K lead = K(1) / (k_factorial<K>(m) * k_pow(k_factorial<K>(n) * k_pow(K(2), n), m));
    const K rem_w = K(1) / (k_factorial<K>(m) * k_pow(K(2), m * n));
    return Vec<K>(diagonal_sign_sum(P, x0, pts, max_signs) * lead - remainder(P, pts, max_signs) * rem_w);
}

/// Right side of the entire polarization formula:
///   (1/((mn)! 2^{mn})) * diagonal sign sum.
/// Agrees with eval(P, pts) for every input iff P lies in the image of psi.
template <class K>
Vec<K> entire_polarization_rhs(const Multipolynomial<K>& P, const Vec<K>& x0, std::span<const Vec<K>> pts,
                               std::uint64_t max_signs = kDefaultMaxSigns) {
    detail::require_equal_signature(P, "entire_polarization_rhs");
    const int m = P.slots();
    const int n = P.signature().degree(0);
    const K w = K(1) / (k_factorial<K>(m * n) * k_pow(K(2), m * n));
    return Vec<K>(diagonal_sign_sum(P, x0, pts, max_signs) * w);
}

namespace detail {

inline constexpr std::uint64_t kMaxGridPoints = std::uint64_t{1} << 20;

/// Coefficients of the degree-b Lagrange basis polynomials on the nodes
/// {0,...,b}: column s holds L_s, row t the x^t coefficients. Applying the
/// matrix to values on the nodes yields monomial coefficients.
template <class K>
std::vector<std::vector<K>> lagrange_coefficient_matrix(int b) {
    const int g = b + 1;
    std::vector<std::vector<K>> W(static_cast<std::size_t>(g), std::vector<K>(static_cast<std::size_t>(g), K(0)));
    for (int s = 0; s < g; ++s) {
        std::vector<K> poly{K(1)};  // prod_{r != s} (x - r) / (s - r)
        K denom(1);
        for (int r = 0; r < g; ++r) {
            if (r == s) continue;
            denom *= K(s - r);
            std::vector<K> next(poly.size() + 1, K(0));
            for (std::size_t t = 0; t < poly.size(); ++t) {
                next[t + 1] += poly[t];
                next[t] -= poly[t] * K(r);
            }
            poly = std::move(next);
        }
        const K inv = K(1) / denom;
        for (std::size_t t = 0; t < poly.size(); ++t) W[t][static_cast<std::size_t>(s)] = poly[t] * inv;
    }
    return W;
}

}  // namespace detail

/// Exact monomial-coefficient extraction for a slot-homogeneous function:
/// samples f on the grid {0,...,n_max}^{m*d} and interpolates per variable.
/// Throws std::domain_error if the sampled function is not an
/// (n_1,...,n_m)-homogeneous polynomial of the stated signature.
template <class K, class F>
Multipolynomial<K> multipolynomial_from_function(const DegreeSignature& sig, int dim, int codim, F&& f) {
    const int m = sig.slots();
    const int b = sig.max_degree();
    const int g = b + 1;
    const int nvars = m * dim;

    std::uint64_t grid = 1;
    for (int v = 0; v < nvars; ++v) {
        if (grid > detail::kMaxGridPoints / static_cast<std::uint64_t>(g))
            throw std::out_of_range("multipolynomial_from_function: grid size exceeds the guard");
        grid *= static_cast<std::uint64_t>(g);
    }

    // row-major over variables (slot-major, coordinate-minor), last variable fastest
    std::vector<Vec<K>> values;
    values.reserve(grid);
    std::vector<int> digit(static_cast<std::size_t>(nvars), 0);
    std::vector<Vec<K>> pts(static_cast<std::size_t>(m), Vec<K>(Vec<K>::Zero(dim)));
    for (std::uint64_t idx = 0;; ++idx) {
        for (int v = 0; v < nvars; ++v) pts[static_cast<std::size_t>(v / dim)][v % dim] = K(digit[static_cast<std::size_t>(v)]);
        values.push_back(f(std::span<const Vec<K>>(pts)));
        if (values.back().size() != codim)
            throw std::invalid_argument("multipolynomial_from_function: wrong codomain dimension");
        int v = nvars - 1;
        while (v >= 0) {
            if (++digit[static_cast<std::size_t>(v)] < g) break;
            digit[static_cast<std::size_t>(v)] = 0;
            --v;
        }
        if (v < 0) break;
    }

    const auto W = detail::lagrange_coefficient_matrix<K>(b);
    std::vector<Vec<K>> line(static_cast<std::size_t>(g), Vec<K>(Vec<K>::Zero(codim)));
    std::uint64_t stride = 1;
    for (int axis = nvars - 1; axis >= 0; --axis) {
        const std::uint64_t block = stride * static_cast<std::uint64_t>(g);
        for (std::uint64_t base = 0; base < grid; base += block) {
            for (std::uint64_t off = 0; off < stride; ++off) {
                for (int t = 0; t < g; ++t) line[static_cast<std::size_t>(t)] = values[base + off + static_cast<std::uint64_t>(t) * stride];
                for (int t = 0; t < g; ++t) {
                    Vec<K> c = Vec<K>::Zero(codim);
                    for (int s = 0; s < g; ++s) c += line[static_cast<std::size_t>(s)] * W[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)];
                    values[base + off + static_cast<std::uint64_t>(t) * stride] = std::move(c);
                }
            }
        }
        stride = block;
    }

    Multipolynomial<K> P(sig, dim, codim);
    std::fill(digit.begin(), digit.end(), 0);
    for (std::uint64_t idx = 0;; ++idx) {
        if (!is_zero_vec(values[idx])) {
            MultiIndexMatrix key(m, dim);
            for (int v = 0; v < nvars; ++v) key(v / dim, v % dim) = digit[static_cast<std::size_t>(v)];
            bool shaped = true;
            for (int i = 0; i < m && shaped; ++i) shaped = key.row_sum(i) == sig.degree(i);
            if (!shaped)
                throw std::domain_error("multipolynomial_from_function: function is not slot-homogeneous of the stated signature");
            P.set_coeff(key, values[idx]);
        }
        int v = nvars - 1;
        while (v >= 0) {
            if (++digit[static_cast<std::size_t>(v)] < g) break;
            digit[static_cast<std::size_t>(v)] = 0;
            --v;
        }
        if (v < 0) break;
    }
    return P;
}

/// Exact symmetry decision. Equal-degrees signatures compare terms under
/// row permutations of the exponent matrices; mixed signatures are decided
/// by polynomial identity testing on the grid {0,...,n_max}^{m*d}, which is
/// interpolation-complete for per-variable degree <= n_max.
template <class K>
bool is_symmetric(const Multipolynomial<K>& P) {
    const int m = P.slots();
    if (m == 1) return true;
    const auto perms = all_permutations(m);

    if (P.signature().equal_degrees()) {
        for (const auto& [key, val] : P.terms())
            for (const auto& p : perms)
                if (!vec_equal(P.coeff(key.permute_rows(p)), val)) return false;
        return true;
    }

    const int b = P.signature().max_degree();
    const int g = b + 1;
    const int nvars = m * P.dim();
    std::uint64_t grid = 1;
    for (int v = 0; v < nvars; ++v) {
        if (grid > detail::kMaxGridPoints / static_cast<std::uint64_t>(g))
            throw std::out_of_range("is_symmetric: grid size exceeds the guard");
        grid *= static_cast<std::uint64_t>(g);
    }

    std::vector<int> digit(static_cast<std::size_t>(nvars), 0);
    std::vector<Vec<K>> pts(static_cast<std::size_t>(m), Vec<K>(Vec<K>::Zero(P.dim())));
    std::vector<Vec<K>> permuted(pts);
    while (true) {
        for (int v = 0; v < nvars; ++v) pts[static_cast<std::size_t>(v / P.dim())][v % P.dim()] = K(digit[static_cast<std::size_t>(v)]);
        const Vec<K> base = eval(P, std::span<const Vec<K>>(pts));
        for (const auto& p : perms) {
            for (int i = 0; i < m; ++i) permuted[static_cast<std::size_t>(i)] = pts[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])];
            if (!vec_equal(eval(P, std::span<const Vec<K>>(permuted)), base)) return false;
        }
        int v = nvars - 1;
        while (v >= 0) {
            if (++digit[static_cast<std::size_t>(v)] < g) break;
            digit[static_cast<std::size_t>(v)] = 0;
            --v;
        }
        if (v < 0) break;
    }
    return true;
}

/// Coefficients c_{i_1...i_M} of the basis representation
///   P(x_1,...,x_m) = sum c_{i_1...i_M} prod_j prod_{r<=n_j} x_j[i_{o_j+r}],
/// computed by the block sign-sum formula with weight 1/(n_1!...n_m! 2^M).
/// Slot j owns the contiguous index block o_j+1 .. o_j+n_j.
template <class K>
std::map<std::vector<int>, Vec<K>> basis_coefficients(const Multipolynomial<K>& P,
                                                      std::uint64_t max_signs = kDefaultMaxSigns) {
    const int m = P.slots();
    const int d = P.dim();
    const int M = P.signature().total();
    check_sign_enumeration(M, max_signs);

    std::uint64_t tuples = 1;
    for (int k = 0; k < M; ++k) {
        if (tuples > detail::kMaxGridPoints / static_cast<std::uint64_t>(d))
            throw std::out_of_range("basis_coefficients: d^M exceeds the guard");
        tuples *= static_cast<std::uint64_t>(d);
    }

    const auto offsets = P.signature().block_offsets();
    std::vector<int> slot_of(static_cast<std::size_t>(M));
    for (int j = 0; j < m; ++j)
        for (int r = 0; r < P.signature().degree(j); ++r)
            slot_of[static_cast<std::size_t>(offsets[static_cast<std::size_t>(j)] + r)] = j;

    K weight(1);
    for (int j = 0; j < m; ++j) weight *= k_factorial<K>(P.signature().degree(j));
    weight = K(1) / (weight * k_pow(K(2), M));

    std::map<std::vector<int>, Vec<K>> out;
    std::vector<int> tuple(static_cast<std::size_t>(M), 0);
    std::vector<Vec<K>> u(static_cast<std::size_t>(m), Vec<K>(Vec<K>::Zero(d)));
    while (true) {
        // all signs +1: u_j = sum of the block's basis vectors
        for (auto& v : u) v.setZero();
        for (int k = 0; k < M; ++k) u[static_cast<std::size_t>(slot_of[static_cast<std::size_t>(k)])][tuple[static_cast<std::size_t>(k)]] += K(1);

        Vec<K> acc = P.zero_value();
        GrayWalker walk(M);
        while (!walk.done()) {
            if (walk.sign_product() < 0)
                acc -= eval(P, std::span<const Vec<K>>(u));
            else
                acc += eval(P, std::span<const Vec<K>>(u));
            const int b = walk.step();
            if (b >= 0)
                u[static_cast<std::size_t>(slot_of[static_cast<std::size_t>(b)])][tuple[static_cast<std::size_t>(b)]] += K(2 * walk.signs()[b]);
        }
        acc *= weight;
        if (!is_zero_vec(acc)) out.emplace(tuple, std::move(acc));

        int k = M - 1;
        while (k >= 0) {
            if (++tuple[static_cast<std::size_t>(k)] < d) break;
            tuple[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return out;
}

/// Evaluates the basis representation produced by basis_coefficients.
template <class K>
Vec<K> reconstruct_from_basis_coefficients(const std::map<std::vector<int>, Vec<K>>& coeffs,
                                           const DegreeSignature& sig, int codim,
                                           std::span<const Vec<K>> pts) {
    const auto offsets = sig.block_offsets();
    Vec<K> out = Vec<K>::Zero(codim);
    for (const auto& [tuple, val] : coeffs) {
        K f(1);
        for (int j = 0; j < sig.slots(); ++j)
            for (int r = 0; r < sig.degree(j); ++r)
                f *= pts[static_cast<std::size_t>(j)][tuple[static_cast<std::size_t>(offsets[static_cast<std::size_t>(j)] + r)]];
        out += val * f;
    }
    return out;
}

/// The M-linear map on K^{m*d} that agrees with P on its diagonal: argument
/// position o_j + r (block j) reads coordinate i of the j-th slot component.
/// Built directly from basis_coefficients.
template <class K>
MultilinearMap<K> diagonal_embed(const Multipolynomial<K>& P, std::uint64_t max_signs = kDefaultMaxSigns) {
    const int m = P.slots();
    const int d = P.dim();
    const int M = P.signature().total();

    const auto offsets = P.signature().block_offsets();
    std::vector<int> slot_of(static_cast<std::size_t>(M));
    for (int j = 0; j < m; ++j)
        for (int r = 0; r < P.signature().degree(j); ++r)
            slot_of[static_cast<std::size_t>(offsets[static_cast<std::size_t>(j)] + r)] = j;

    MultilinearMap<K> A(M, m * d, P.codim());
    std::vector<int> key(static_cast<std::size_t>(M));
    for (const auto& [tuple, val] : basis_coefficients(P, max_signs)) {
        for (int k = 0; k < M; ++k)
            key[static_cast<std::size_t>(k)] = slot_of[static_cast<std::size_t>(k)] * d + tuple[static_cast<std::size_t>(k)];
        A.set_coeff(key, val);
    }
    return A;
}

/// psi(A)(x_1,...,x_m) = A x_1^n ... x_m^n for a symmetric mn-linear A.
/// Coefficients are extracted by exact grid interpolation.
template <class K>
Multipolynomial<K> psi(const MultilinearMap<K>& A, int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("psi: m and n must be positive");
    if (A.arity() != m * n) throw std::invalid_argument("psi: arity is not m*n");
    if (!is_symmetric(A)) throw std::domain_error("psi: map is not symmetric");

    const MultiIndex profile(std::vector<int>(static_cast<std::size_t>(m), n));
    auto P = multipolynomial_from_function<K>(
        DegreeSignature::equal(m, n), A.dim(), A.codim(),
        [&](std::span<const Vec<K>> pts) { return power_eval(A, pts, profile); });

    // spot check against the defining evaluation at deterministic pseudo-random points
    std::mt19937_64 rng(0x70736921u);
    for (int rep = 0; rep < 3; ++rep) {
        std::vector<Vec<K>> pts(static_cast<std::size_t>(m), Vec<K>(Vec<K>::Zero(A.dim())));
        for (auto& p : pts)
            for (int c = 0; c < A.dim(); ++c)
                p[c] = K(static_cast<int>(rng() % 13) - 6) / K(1 + static_cast<int>(rng() % 4));
        if (!vec_equal(eval(P, std::span<const Vec<K>>(pts)), power_eval(A, std::span<const Vec<K>>(pts), profile)))
            throw std::logic_error("psi: interpolated multipolynomial disagrees with the map");
    }
    return P;
}

/// Outcome of the image-membership test for psi.
template <class K>
struct PsiWitness {
    struct Defect {
        Vec<K> x0;
        std::vector<Vec<K>> points;
        Vec<K> lhs;  // direct evaluation
        Vec<K> rhs;  // entire polarization right side
    };

    bool member = false;
    std::optional<MultilinearMap<K>> witness;  // psi(witness) == P when member
    std::optional<Defect> defect;              // failure of the entire formula otherwise
};

/// Decides P in Im(psi) constructively: builds the candidate mn-linear map
/// from the symmetric polarization of the diagonal embedding by merging each
/// argument's slot blocks, then compares psi(candidate) with P. On failure
/// produces a point tuple where the entire polarization formula breaks
/// (canonical basis tuples first, then seeded random tuples).
template <class K>
PsiWitness<K> in_image_psi(const Multipolynomial<K>& P, std::uint64_t max_signs = kDefaultMaxSigns) {
    detail::require_equal_signature(P, "in_image_psi");
    if (!is_symmetric(P)) throw std::domain_error("in_image_psi: multipolynomial is not symmetric");

    const int m = P.slots();
    const int n = P.signature().degree(0);
    const int d = P.dim();
    const int M = m * n;

    const MultilinearMap<K> embedded = symmetrize(diagonal_embed(P, max_signs));
    MultilinearMap<K> candidate(M, d, P.codim());
    std::vector<int> key(static_cast<std::size_t>(M));
    for (const auto& [t, val] : embedded.terms()) {
        for (int k = 0; k < M; ++k) key[static_cast<std::size_t>(k)] = t[static_cast<std::size_t>(k)] % d;
        candidate.add_to_coeff(key, val);
    }

    PsiWitness<K> out;
    if (psi(candidate, m, n) == P) {
        out.member = true;
        out.witness = std::move(candidate);
        return out;
    }

    const Vec<K> zero = Vec<K>::Zero(d);
    const auto try_points = [&](const Vec<K>& x0, const std::vector<Vec<K>>& pts) {
        const Vec<K> lhs = eval(P, std::span<const Vec<K>>(pts));
        const Vec<K> rhs = entire_polarization_rhs(P, x0, std::span<const Vec<K>>(pts), max_signs);
        if (vec_equal(lhs, rhs)) return false;
        out.defect = typename PsiWitness<K>::Defect{x0, pts, lhs, rhs};
        return true;
    };

    // canonical basis tuples with x0 = 0, lexicographic
    std::vector<int> tuple(static_cast<std::size_t>(m), 0);
    while (true) {
        std::vector<Vec<K>> pts;
        pts.reserve(static_cast<std::size_t>(m));
        for (int j : tuple) pts.push_back(basis_vec<K>(d, j));
        if (try_points(zero, pts)) return out;
        int k = m - 1;
        while (k >= 0) {
            if (++tuple[static_cast<std::size_t>(k)] < d) break;
            tuple[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
    }

    std::mt19937_64 rng(0x696d5073u);
    for (int rep = 0; rep < 64; ++rep) {
        const auto draw = [&] {
            Vec<K> p = Vec<K>::Zero(d);
            for (int c = 0; c < d; ++c) p[c] = K(static_cast<int>(rng() % 7) - 3) / K(1 + static_cast<int>(rng() % 3));
            return p;
        };
        const Vec<K> x0 = draw();
        std::vector<Vec<K>> pts;
        pts.reserve(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) pts.push_back(draw());
        if (try_points(x0, pts)) return out;
    }
    throw std::logic_error("in_image_psi: non-member without a locatable defect");
}

/// The multipolynomial with signature (1,...,1) carrying the same
/// coefficients as the m-linear map.
template <class K>
Multipolynomial<K> multipoly_from_multilinear(const MultilinearMap<K>& A) {
    Multipolynomial<K> P(DegreeSignature::equal(A.arity(), 1), A.dim(), A.codim());
    for (const auto& [key, val] : A.terms()) {
        MultiIndexMatrix mat(A.arity(), A.dim());
        for (int i = 0; i < A.arity(); ++i) mat(i, key[static_cast<std::size_t>(i)]) = 1;
        P.set_coeff(mat, val);
    }
    return P;
}

/// Inverse of multipoly_from_multilinear; requires signature (1,...,1).
template <class K>
MultilinearMap<K> multilinear_from_multipoly(const Multipolynomial<K>& P) {
    for (int j = 0; j < P.slots(); ++j)
        if (P.signature().degree(j) != 1)
            throw std::domain_error("multilinear_from_multipoly: signature is not (1,...,1)");
    MultilinearMap<K> A(P.slots(), P.dim(), P.codim());
    std::vector<int> key(static_cast<std::size_t>(P.slots()));
    for (const auto& [mat, val] : P.terms()) {
        for (int i = 0; i < mat.rows(); ++i)
            for (int j = 0; j < mat.cols(); ++j)
                if (mat(i, j) == 1) key[static_cast<std::size_t>(i)] = j;
        A.set_coeff(key, val);
    }
    return A;
}

/// The homogeneous polynomial carried by a one-slot multipolynomial.
template <class K>
HomogeneousPolynomial<K> homogeneous_from_multipoly(const Multipolynomial<K>& P) {
    if (P.slots() != 1) throw std::domain_error("homogeneous_from_multipoly: more than one slot");
    return slot_polynomial(P, 0, std::span<const Vec<K>>{});
}

/// The one-slot multipolynomial carrying a homogeneous polynomial.
template <class K>
Multipolynomial<K> multipoly_from_homogeneous(const HomogeneousPolynomial<K>& P) {
    Multipolynomial<K> out(DegreeSignature(std::vector<int>{P.degree()}), P.dim(), P.codim());
    for (const auto& [alpha, val] : P.terms()) {
        MultiIndexMatrix key(1, P.dim());
        for (int j = 0; j < P.dim(); ++j) key(0, j) = alpha[j];
        out.set_coeff(key, val);
    }
    return out;
}

template <class K>
Multipolynomial<K> operator+(const Multipolynomial<K>& a, const Multipolynomial<K>& b) {
    if (a.signature() != b.signature() || a.dim() != b.dim() || a.codim() != b.codim())
        throw std::invalid_argument("Multipolynomial: shape mismatch in +");
    Multipolynomial<K> out = a;
    for (const auto& [key, val] : b.terms()) out.add_to_coeff(key, val);
    return out;
}

template <class K>
Multipolynomial<K> operator*(const K& c, const Multipolynomial<K>& a) {
    Multipolynomial<K> out(a.signature(), a.dim(), a.codim());
    for (const auto& [key, val] : a.terms()) out.set_coeff(key, Vec<K>(val * c));
    return out;
}

}  // namespace multipol

#endif  // MULTIPOL_MULTIPOLYNOMIAL_HPP
