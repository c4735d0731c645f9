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

#include "multipol/combinatorics.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace multipol {

namespace {

constexpr std::uint64_t kMaxMaterializedMatrices = 1u << 22;

}  // namespace

void check_sign_enumeration(int k, std::uint64_t max_signs) {
    if (k < 1 || k > 62) throw std::out_of_range("sign enumeration: k out of range");
    if ((std::uint64_t{1} << k) > max_signs)
        throw std::out_of_range("sign enumeration: 2^k exceeds the enumeration guard");
}

MultiIndex::MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
    for (int v : e_)
        if (v < 0) throw std::invalid_argument("MultiIndex: negative entry");
}

int MultiIndex::norm() const {
    return std::accumulate(e_.begin(), e_.end(), 0);
}

Rational factorial(const MultiIndex& alpha) {
    Rational f(1);
    for (int v : alpha.entries()) f *= factorial_scalar(v);
    return f;
}

MultiIndexMatrix::MultiIndexMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows) * cols, 0) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("MultiIndexMatrix: empty shape");
}

MultiIndexMatrix::MultiIndexMatrix(int rows, int cols, std::vector<int> row_major)
    : rows_(rows), cols_(cols), e_(std::move(row_major)) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("MultiIndexMatrix: empty shape");
    if (e_.size() != static_cast<std::size_t>(rows) * cols)
        throw std::invalid_argument("MultiIndexMatrix: entry count does not match shape");
    for (int v : e_)
        if (v < 0) throw std::invalid_argument("MultiIndexMatrix: negative entry");
}

int MultiIndexMatrix::row_sum(int i) const {
    int s = 0;
    for (int j = 0; j < cols_; ++j) s += (*this)(i, j);
    return s;
}

int MultiIndexMatrix::col_sum(int j) const {
    int s = 0;
    for (int i = 0; i < rows_; ++i) s += (*this)(i, j);
    return s;
}

MultiIndex MultiIndexMatrix::row(int i) const {
    std::vector<int> r(e_.begin() + static_cast<std::ptrdiff_t>(i) * cols_,
                       e_.begin() + static_cast<std::ptrdiff_t>(i + 1) * cols_);
    return MultiIndex(std::move(r));
}

MultiIndexMatrix MultiIndexMatrix::permute_rows(std::span<const int> perm) const {
    if (static_cast<int>(perm.size()) != rows_)
        throw std::invalid_argument("permute_rows: permutation size mismatch");
    MultiIndexMatrix out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(i, j) = (*this)(perm[static_cast<std::size_t>(i)], j);
    return out;
}

Rational row_factorial_product(const MultiIndexMatrix& alpha) {
    Rational f(1);
    for (int i = 0; i < alpha.rows(); ++i) f *= factorial(alpha.row(i));
    return f;
}

SignVector::SignVector(int k) : s_(static_cast<std::size_t>(k), std::int8_t{1}) {
    if (k < 1) throw std::invalid_argument("SignVector: length must be positive");
}

SignVector SignVector::at_gray_rank(int k, std::uint64_t rank) {
    SignVector s(k);
    const std::uint64_t bits = rank ^ (rank >> 1);
    for (int b = 0; b < k; ++b)
        if ((bits >> b) & 1u) s.s_[static_cast<std::size_t>(b)] = -1;
    return s;
}

int SignVector::product() const {
    int p = 1;
    for (std::int8_t v : s_) p *= v;
    return p;
}

void SignVector::flip(int k) {
    auto& v = s_.at(static_cast<std::size_t>(k));
    v = static_cast<std::int8_t>(-v);
}

GrayWalker::GrayWalker(int k, std::uint64_t first, std::uint64_t last)
    : s_(SignVector::at_gray_rank(k, first)), index_(first), last_(last) {
    if (last_ == 0) last_ = std::uint64_t{1} << k;
    if (first > last_) throw std::out_of_range("GrayWalker: start beyond end");
    product_ = (std::popcount(first ^ (first >> 1)) % 2 == 0) ? 1 : -1;
}

int GrayWalker::step() {
    ++index_;
    if (index_ >= last_) return -1;
    const int b = std::countr_zero(index_);
    s_.flip(b);
    product_ = -product_;
    return b;
}

SignVectorSequence::SignVectorSequence(int k, std::uint64_t max_signs) : k_(k) {
    check_sign_enumeration(k, max_signs);
}

SignVectorSequence enumerate_sign_vectors(int k, std::uint64_t max_signs) {
    return SignVectorSequence(k, max_signs);
}

Rational signed_power_sum(int n, int p, std::uint64_t max_signs) {
    if (n < 1) throw std::invalid_argument("signed_power_sum: n must be positive");
    if (p < 0) throw std::invalid_argument("signed_power_sum: p must be nonnegative");
    check_sign_enumeration(n, max_signs);
    mpz_class acc(0);
    GrayWalker walk(n);
    int running = n;  // sum of the current sign vector; starts at all +1
    while (!walk.done()) {
        mpz_class term;
        mpz_pow_ui(term.get_mpz_t(), mpz_class(running).get_mpz_t(), static_cast<unsigned long>(p));
        if (walk.sign_product() < 0)
            acc -= term;
        else
            acc += term;
        const int b = walk.step();
        if (b >= 0) running += 2 * walk.signs()[b];
    }
    return Rational(acc);
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // exact at every step: r * (n-k+i) is divisible by i
        r = r / static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n - k + i) +
            r % static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

std::vector<MultiIndex> enumerate_compositions(int total, int parts) {
    if (total < 0 || parts < 1) throw std::invalid_argument("enumerate_compositions: bad arguments");
    std::vector<MultiIndex> out;
    std::vector<int> cur(static_cast<std::size_t>(parts), 0);
    const auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == parts - 1) {
            cur[static_cast<std::size_t>(pos)] = remaining;
            out.emplace_back(cur);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            cur[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    rec(rec, 0, total);
    return out;
}

std::vector<MultiIndexMatrix> enumerate_row_sum_matrices(int m, int d, int n) {
    if (m < 1 || d < 1 || n < 1)
        throw std::invalid_argument("enumerate_row_sum_matrices: parameters must be positive");
    std::vector<int> sums(static_cast<std::size_t>(m), n);
    return enumerate_signature_matrices(sums, d);
}

std::vector<MultiIndexMatrix> enumerate_signature_matrices(std::span<const int> row_sums, int d) {
    const int m = static_cast<int>(row_sums.size());
    if (m < 1 || d < 1) throw std::invalid_argument("enumerate_signature_matrices: empty shape");

    std::uint64_t count = 1;
    for (int i = 0; i < m; ++i) {
        const std::uint64_t per_row = binomial(row_sums[static_cast<std::size_t>(i)] + d - 1, d - 1);
        if (per_row != 0 && count > kMaxMaterializedMatrices / per_row)
            throw std::length_error("enumerate_signature_matrices: too many matrices");
        count *= per_row;
    }

    std::vector<std::vector<MultiIndex>> rows;
    rows.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) rows.push_back(enumerate_compositions(row_sums[static_cast<std::size_t>(i)], d));

    std::vector<MultiIndexMatrix> out;
    out.reserve(count);
    std::vector<std::size_t> pick(static_cast<std::size_t>(m), 0);
    while (true) {
        std::vector<int> flat;
        flat.reserve(static_cast<std::size_t>(m) * d);
        for (int i = 0; i < m; ++i) {
            const auto& r = rows[static_cast<std::size_t>(i)][pick[static_cast<std::size_t>(i)]].entries();
            flat.insert(flat.end(), r.begin(), r.end());
        }
        out.emplace_back(m, d, std::move(flat));
        int i = m - 1;
        while (i >= 0) {
            if (++pick[static_cast<std::size_t>(i)] < rows[static_cast<std::size_t>(i)].size()) break;
            pick[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return out;
}

std::vector<MultiIndexMatrix> MatrixSets::off_diagonal() const {
    std::vector<MultiIndexMatrix> out;
    std::set_difference(m_set.begin(), m_set.end(), d_set.begin(), d_set.end(), std::back_inserter(out));
    return out;
}

MatrixSets matrix_sets_M_and_D(int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("matrix_sets_M_and_D: parameters must be positive");
    MatrixSets sets;

    // M: enumerate the m columns 1..m per row, prepend the zero 0th column,
    // keep matrices whose columns 1..m all sum to n.
    for (const auto& body : enumerate_row_sum_matrices(m, m, n)) {
        bool ok = true;
        for (int j = 0; j < m && ok; ++j) ok = body.col_sum(j) == n;
        if (!ok) continue;
        MultiIndexMatrix full(m, m + 1);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) full(i, j + 1) = body(i, j);
        sets.m_set.push_back(std::move(full));
    }

    // D: row permutations of the diagonal matrix n*I (in columns 1..m).
    for (const auto& perm : all_permutations(m)) {
        MultiIndexMatrix full(m, m + 1);
        for (int i = 0; i < m; ++i) full(i, perm[static_cast<std::size_t>(i)] + 1) = n;
        sets.d_set.push_back(std::move(full));
    }
    std::sort(sets.d_set.begin(), sets.d_set.end());
    return sets;
}

int epsilon_block(const MultiIndexMatrix& alpha, const SignVector& eps, int i, int j, int n) {
    if (i < 0 || i >= alpha.rows() || j < 0 || j >= alpha.cols())
        throw std::out_of_range("epsilon_block: index out of range");
    if (alpha.row_sum(i) != n) throw std::invalid_argument("epsilon_block: row sum differs from n");
    const int a = alpha(i, j);
    if (a == 0) return 0;
    int prefix = 0;
    for (int c = 0; c < j; ++c) prefix += alpha(i, c);
    const int start = i * n + prefix;
    if (start + a > eps.size()) throw std::out_of_range("epsilon_block: sign vector too short");
    int s = 0;
    for (int t = 0; t < a; ++t) s += eps[start + t];
    return s;
}

std::vector<std::vector<int>> all_permutations(int m) {
    if (m < 1 || m > 8) throw std::out_of_range("all_permutations: m out of range");
    std::vector<int> idx(static_cast<std::size_t>(m));
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(idx);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return out;
}

}  // namespace multipol
