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

#ifndef MULTIPOL_RATIONAL_HPP
#define MULTIPOL_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include <Eigen/Core>

namespace multipol {

/// Exact rational scalar. Always stored in lowest terms with a positive
/// denominator; every operation is exact. Arithmetic returns plain values
/// (no expression templates), so the type can be used as an Eigen scalar.
class Rational {
   public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}
    Rational(long n) : v_(n) {}
    Rational(long num, long den);
    explicit Rational(const mpz_class& z) : v_(z) {}
    explicit Rational(const mpq_class& q);

    /// Parses "p" or "p/q" (q > 0). Throws std::invalid_argument on
    /// malformed input or zero denominator.
    static Rational from_string(std::string_view s);

    /// Canonical form: "p" when the denominator is 1, otherwise "p/q".
    std::string str() const { return v_.get_str(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }
    const mpq_class& value() const { return v_; }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational operator+() const { return *this; }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.v_, b.v_);
        if (c < 0) return std::strong_ordering::less;
        if (c > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend Rational abs(const Rational& a) { return Rational(mpq_class(::abs(a.v_))); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

   private:
    mpq_class v_;
};

/// base^exp for exp >= 0, exact.
Rational pow_int(const Rational& base, int exp);

/// n! as an exact scalar (n >= 0).
Rational factorial_scalar(int n);

/// Dense coordinate vector over a scalar field; points of the domain and
/// values of the codomain are both stored this way.
template <class K>
using Vec = Eigen::Matrix<K, Eigen::Dynamic, 1>;

template <class K>
bool is_zero_vec(const Vec<K>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!(v[i] == K(0))) return false;
    return true;
}

template <class K>
bool vec_equal(const Vec<K>& a, const Vec<K>& b) {
    if (a.size() != b.size()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i])) return false;
    return true;
}

/// j-th canonical basis vector of K^d.
template <class K>
Vec<K> basis_vec(int d, int j) {
    Vec<K> e = Vec<K>::Zero(d);
    e[j] = K(1);
    return e;
}

}  // namespace multipol

namespace Eigen {

template <>
struct NumTraits<multipol::Rational> : GenericNumTraits<multipol::Rational> {
    using Real = multipol::Rational;
    using NonInteger = multipol::Rational;
    using Literal = multipol::Rational;
    using Nested = multipol::Rational;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 60,
        MulCost = 60,
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen

#endif  // MULTIPOL_RATIONAL_HPP
