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

#include <doctest.h>

#include <stdexcept>

#include "multipol/rational.hpp"

using multipol::Rational;
using multipol::Vec;

TEST_CASE("rationals are stored in lowest terms with positive denominator") {
    CHECK(Rational(2, 4).str() == "1/2");
    CHECK(Rational(3, -6).str() == "-1/2");
    CHECK(Rational(-4, -2).str() == "2");
    CHECK(Rational(0, 7).str() == "0");
    CHECK(Rational(7).str() == "7");
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("field operations are exact") {
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 3) - Rational(1, 3) == Rational(0));
    CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
    CHECK(Rational(5, 7) / Rational(5, 7) == Rational(1));
    CHECK((-Rational(3, 5)).str() == "-3/5");
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);

    // repeated accumulation stays exact
    Rational acc(0);
    for (int i = 0; i < 300; ++i) acc += Rational(1, 3);
    CHECK(acc == Rational(100));
}

TEST_CASE("parsing accepts p and p/q and rejects malformed literals") {
    CHECK(Rational::from_string("7") == Rational(7));
    CHECK(Rational::from_string("-3/9") == Rational(-1, 3));
    CHECK(Rational::from_string("-3/9").str() == "-1/3");
    CHECK(Rational::from_string("0") == Rational(0));
    for (const char* bad : {"", "1/", "/2", "a", "1/0", "1/-2", "1.5", "2 /3", "--1"})
        CHECK_THROWS_AS(Rational::from_string(bad), std::invalid_argument);

    // canonical print/parse round trip
    const Rational r(-35, 91);
    CHECK(Rational::from_string(r.str()) == r);
}

TEST_CASE("ordering and helpers") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1) < Rational(0));
    CHECK(Rational(1, 2) == Rational(2, 4));
    CHECK(Rational(3, 2).sign() == 1);
    CHECK(Rational(-3, 2).sign() == -1);
    CHECK(Rational(0).is_zero());
    CHECK(Rational(4, 2).is_integer());
    CHECK_FALSE(Rational(1, 2).is_integer());
    CHECK(abs(Rational(-5, 3)) == Rational(5, 3));

    CHECK(multipol::pow_int(Rational(-2, 3), 3) == Rational(-8, 27));
    CHECK(multipol::pow_int(Rational(7), 0) == Rational(1));
    CHECK_THROWS_AS(multipol::pow_int(Rational(2), -1), std::invalid_argument);

    CHECK(multipol::factorial_scalar(0) == Rational(1));
    CHECK(multipol::factorial_scalar(5) == Rational(120));
    CHECK(multipol::factorial_scalar(20).str() == "2432902008176640000");
}

TEST_CASE("dense vectors over the rational scalar") {
    using V = Vec<Rational>;
    V x = V::Zero(3);
    x[0] = Rational(1, 2);
    x[1] = Rational(-1, 3);
    V y = V::Zero(3);
    y[0] = Rational(1, 2);
    y[2] = Rational(2);

    const V s = x + y;
    CHECK(s[0] == Rational(1));
    CHECK(s[1] == Rational(-1, 3));
    CHECK(s[2] == Rational(2));

    const V t = x * Rational(6);
    CHECK(t[0] == Rational(3));
    CHECK(t[1] == Rational(-2));

    CHECK(multipol::is_zero_vec<Rational>(V::Zero(4)));
    CHECK_FALSE(multipol::is_zero_vec<Rational>(t));
    CHECK(multipol::vec_equal<Rational>(x + y, y + x));

    const V e1 = multipol::basis_vec<Rational>(2, 0);
    CHECK(e1[0] == Rational(1));
    CHECK(e1[1] == Rational(0));
}
