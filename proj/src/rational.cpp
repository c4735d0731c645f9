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

#include "multipol/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace multipol {

Rational::Rational(long num, long den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational::Rational(const mpq_class& q) : v_(q) {
    v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
}

Rational Rational::from_string(std::string_view s) {
    const auto fail = [&] {
        throw std::invalid_argument("Rational: malformed literal '" + std::string(s) + "'");
    };
    if (s.empty()) fail();
    std::size_t pos = 0;
    if (s[pos] == '-' || s[pos] == '+') ++pos;
    std::size_t digits = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos, ++digits;
    if (digits == 0) fail();
    std::string_view den;
    if (pos < s.size()) {
        if (s[pos] != '/') fail();
        den = s.substr(pos + 1);
        if (den.empty()) fail();
        for (char c : den)
            if (!std::isdigit(static_cast<unsigned char>(c))) fail();
    }
    mpq_class q;
    if (q.set_str(std::string(s), 10) != 0) fail();
    if (q.get_den() == 0) fail();
    q.canonicalize();
    return Rational(q);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.v_;
}

Rational pow_int(const Rational& base, int exp) {
    if (exp < 0) throw std::invalid_argument("pow_int: negative exponent");
    mpq_class out;
    const auto e = static_cast<unsigned long>(exp);
    mpz_pow_ui(mpq_numref(out.get_mpq_t()), mpq_numref(base.value().get_mpq_t()), e);
    mpz_pow_ui(mpq_denref(out.get_mpq_t()), mpq_denref(base.value().get_mpq_t()), e);
    return Rational(out);
}

Rational factorial_scalar(int n) {
    if (n < 0) throw std::invalid_argument("factorial_scalar: negative argument");
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(f);
}

}  // namespace multipol
