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

#ifndef MULTIPOL_COMBINATORICS_HPP
#define MULTIPOL_COMBINATORICS_HPP

#include <compare>
#include <cstdint>
#include <iterator>
#include <span>
#include <utility>
#include <vector>

#include "multipol/rational.hpp"

namespace multipol {

/// Default guard for sign-vector enumerations: at most 2^24 vectors.
inline constexpr int kMaxSignBits = 24;
inline constexpr std::uint64_t kDefaultMaxSigns = std::uint64_t{1} << kMaxSignBits;

/// Tuple of nonnegative integers (a multi-index).
class MultiIndex {
   public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries);
    static MultiIndex zeros(int n) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(n), 0)); }

    int size() const { return static_cast<int>(e_.size()); }
    int operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
    std::span<const int> entries() const { return e_; }

    /// |alpha|: the sum of the entries.
    int norm() const;

    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

   private:
    std::vector<int> e_;
};

/// alpha! = prod_i alpha_i!, exact.
Rational factorial(const MultiIndex& alpha);

/// m x d matrix of nonnegative integers, row-major. Ordered lexicographically
/// on the flattened entries so it can key canonical sparse maps.
class MultiIndexMatrix {
   public:
    MultiIndexMatrix() = default;
    MultiIndexMatrix(int rows, int cols);
    MultiIndexMatrix(int rows, int cols, std::vector<int> row_major);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int operator()(int i, int j) const { return e_[idx(i, j)]; }
    int& operator()(int i, int j) { return e_[idx(i, j)]; }
    std::span<const int> entries() const { return e_; }

    int row_sum(int i) const;
    int col_sum(int j) const;
    MultiIndex row(int i) const;
    MultiIndexMatrix permute_rows(std::span<const int> perm) const;

    friend auto operator<=>(const MultiIndexMatrix&, const MultiIndexMatrix&) = default;

   private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * cols_ + j; }

    int rows_ = 0, cols_ = 0;
    std::vector<int> e_;
};

/// prod_i alpha_i! over the rows of the matrix, exact.
Rational row_factorial_product(const MultiIndexMatrix& alpha);

/// Vector of k signs, each +1 or -1.
class SignVector {
   public:
    explicit SignVector(int k);  // all +1
    /// Sign vector for position `rank` of the Gray-code walk (bit b of
    /// gray(rank) set means entry b is -1).
    static SignVector at_gray_rank(int k, std::uint64_t rank);

    int size() const { return static_cast<int>(s_.size()); }
    int operator[](int k) const { return s_[static_cast<std::size_t>(k)]; }
    int product() const;
    void flip(int k);

    friend bool operator==(const SignVector&, const SignVector&) = default;

   private:
    std::vector<std::int8_t> s_;
};

/// Stateful Gray-code walk over {+1,-1}^k: consecutive states differ in
/// exactly one entry, so kernels can update partial sums incrementally.
class GrayWalker {
   public:
    explicit GrayWalker(int k, std::uint64_t first = 0, std::uint64_t last = 0);

    const SignVector& signs() const { return s_; }
    int sign_product() const { return product_; }
    bool done() const { return index_ >= last_; }
    std::uint64_t index() const { return index_; }

    /// Advances to the next vector; returns the flipped entry.
    int step();

   private:
    SignVector s_;
    std::uint64_t index_ = 0, last_ = 0;
    int product_ = 1;
};

/// Lazy range over all 2^k sign vectors in Gray-code order.
class SignVectorSequence {
   public:
    explicit SignVectorSequence(int k, std::uint64_t max_signs = kDefaultMaxSigns);

    class iterator {
       public:
        using value_type = SignVector;
        using difference_type = std::ptrdiff_t;

        explicit iterator(int k) : walk_(k) {}
        const SignVector& operator*() const { return walk_.signs(); }
        iterator& operator++() {
            if (!walk_.done()) walk_.step();
            return *this;
        }
        void operator++(int) { ++*this; }
        friend bool operator==(const iterator& it, std::default_sentinel_t) { return it.walk_.done(); }

       private:
        GrayWalker walk_;
    };

    iterator begin() const { return iterator(k_); }
    std::default_sentinel_t end() const { return {}; }
    std::uint64_t size() const { return std::uint64_t{1} << k_; }
    int width() const { return k_; }

   private:
    int k_;
};

/// All 2^k sign vectors, Gray-code order. Throws std::out_of_range when the
/// enumeration would exceed `max_signs` vectors.
SignVectorSequence enumerate_sign_vectors(int k, std::uint64_t max_signs = kDefaultMaxSigns);

/// Throws std::out_of_range unless 1 <= k and 2^k <= max_signs.
void check_sign_enumeration(int k, std::uint64_t max_signs = kDefaultMaxSigns);

/// sum over delta in {+1,-1}^n of delta_1...delta_n (delta_1+...+delta_n)^p,
/// by direct enumeration. Vanishes for p < n and equals n! 2^n at p = n.
Rational signed_power_sum(int n, int p, std::uint64_t max_signs = kDefaultMaxSigns);

/// C(n, k) without overflow for the sizes used here.
std::uint64_t binomial(int n, int k);

/// All weak compositions of `total` into `parts` parts, lexicographic.
std::vector<MultiIndex> enumerate_compositions(int total, int parts);

/// All m x d matrices whose every row sums to n, in lexicographic order of
/// the flattened entries. Count: C(n+d-1, d-1)^m.
std::vector<MultiIndexMatrix> enumerate_row_sum_matrices(int m, int d, int n);

/// Row i sums to row_sums[i]; otherwise as enumerate_row_sum_matrices.
std::vector<MultiIndexMatrix> enumerate_signature_matrices(std::span<const int> row_sums, int d);

/// The matrix sets of the remainder function: M = m x (m+1) matrices with a
/// zero 0th column and all line sums (rows, and columns 1..m) equal to n;
/// D subset of M holds the m! row-permutations of the diagonal matrix n*I.
struct MatrixSets {
    std::vector<MultiIndexMatrix> m_set;  // lexicographic
    std::vector<MultiIndexMatrix> d_set;  // lexicographic

    /// M \ D, lexicographic.
    std::vector<MultiIndexMatrix> off_diagonal() const;
};

MatrixSets matrix_sets_M_and_D(int m, int n);

/// Partial sign sum eps_{ij} for a matrix with equal row sums n: entry (i,j)
/// consumes alpha(i,j) consecutive signs inside row i's block of n signs,
/// the blocks of one row packed left to right. Returns 0 when alpha(i,j)=0.
/// Indices are 0-based.
int epsilon_block(const MultiIndexMatrix& alpha, const SignVector& eps, int i, int j, int n);

/// All permutations of {0,...,m-1} in lexicographic order. Guarded m <= 8.
std::vector<std::vector<int>> all_permutations(int m);

}  // namespace multipol

#endif  // MULTIPOL_COMBINATORICS_HPP
