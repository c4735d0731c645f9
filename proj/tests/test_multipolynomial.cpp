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

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

#include "multipol/multipolynomial.hpp"
#include "multipol/random.hpp"
#include "test_support.hpp"

using namespace multipol;
using testing::coordinate_product_poly;
using testing::make_point;
using testing::scalar_value;
using V = Vec<Rational>;
using PtList = std::vector<V>;

namespace {

GeneratorConfig cfg_with_seed(std::uint64_t seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    return cfg;
}

const V e1 = basis_vec<Rational>(2, 0);
const V e2 = basis_vec<Rational>(2, 1);

}  // namespace

TEST_CASE("evaluation of the coordinate-product example") {
    const auto P = coordinate_product_poly();
    const V ones = make_point({Rational(1), Rational(1)});
    const PtList diag{ones, ones};
    CHECK(eval(P, std::span<const V>(diag))[0] == Rational(1));

    const PtList basis{e1, e2};
    CHECK(eval(P, std::span<const V>(basis))[0] == Rational(0));

    const PtList with_zero{V::Zero(2), ones};
    CHECK(is_zero_vec(eval(P, std::span<const V>(with_zero))));

    const PtList wrong{ones};
    CHECK_THROWS_AS(eval(P, std::span<const V>(wrong)), std::invalid_argument);
}

TEST_CASE("slot homogeneity") {
    const auto P = random_multipolynomial(cfg_with_seed(3), DegreeSignature(std::vector<int>{2, 3}), 2, 2, false);
    auto rng = Rng(4);
    GeneratorConfig cfg;
    const Rational lam = random_rational(rng, cfg);
    PtList pts{random_point(rng, 2, cfg), random_point(rng, 2, cfg)};
    const V base = eval(P, std::span<const V>(pts));
    for (int j = 0; j < 2; ++j) {
        PtList scaled = pts;
        scaled[static_cast<std::size_t>(j)] = scaled[static_cast<std::size_t>(j)] * lam;
        const V got = eval(P, std::span<const V>(scaled));
        CHECK(vec_equal(got, V(base * pow_int(lam, P.signature().degree(j)))));
    }
}

TEST_CASE("slot polynomial by partial evaluation") {
    const auto P = coordinate_product_poly();
    const PtList fixed{make_point({Rational(1), Rational(1)})};
    const auto Q = slot_polynomial(P, 1, std::span<const V>(fixed));
    CHECK(Q.degree() == 2);
    CHECK(Q.terms().size() == 1);
    CHECK(Q.coeff(MultiIndex(std::vector<int>{1, 1}))[0] == Rational(1));

    const PtList zero_fixed{V::Zero(2)};
    CHECK(slot_polynomial(P, 0, std::span<const V>(zero_fixed)).terms().empty());

    // one slot: the polynomial itself, reinterpreted
    Multipolynomial<Rational> single(DegreeSignature(std::vector<int>{3}), 2, 1);
    single.set_coeff(MultiIndexMatrix(1, 2, {2, 1}), scalar_value(Rational(5)));
    const auto H = slot_polynomial(single, 0, std::span<const V>{});
    CHECK(H.coeff(MultiIndex(std::vector<int>{2, 1}))[0] == Rational(5));

    // partial evaluation agrees with full evaluation at random points
    const auto R = random_multipolynomial(cfg_with_seed(9), DegreeSignature(std::vector<int>{1, 2}), 2, 1, false);
    auto rng = Rng(10);
    GeneratorConfig cfg;
    for (int rep = 0; rep < 5; ++rep) {
        const V x = random_point(rng, 2, cfg);
        const V y = random_point(rng, 2, cfg);
        const PtList both{x, y};
        const PtList just_x{x};
        CHECK(vec_equal(eval(slot_polynomial(R, 1, std::span<const V>(just_x)), y),
                        eval(R, std::span<const V>(both))));
    }
}

TEST_CASE("diagonal evaluation") {
    const auto P = coordinate_product_poly();
    CHECK(diag_eval(P, make_point({Rational(1), Rational(1)}))[0] == Rational(1));
    CHECK(diag_eval(P, make_point({Rational(5), Rational(1)}))[0] == Rational(25));
    CHECK(is_zero_vec(diag_eval(P, V(V::Zero(2)))));

    const auto mixed =
        random_multipolynomial(cfg_with_seed(12), DegreeSignature(std::vector<int>{1, 2}), 2, 1, false);
    CHECK_THROWS_AS(diag_eval(mixed, e1), std::domain_error);

    // agrees with eval at equal arguments
    const auto R = random_multipolynomial(cfg_with_seed(13), DegreeSignature::equal(3, 2), 2, 1, false);
    auto rng = Rng(14);
    GeneratorConfig cfg;
    const V x = random_point(rng, 2, cfg);
    const PtList rep3{x, x, x};
    CHECK(vec_equal(diag_eval(R, x), eval(R, std::span<const V>(rep3))));
}

TEST_CASE("combined expansion: both sides agree") {
    auto rng = Rng(21);
    GeneratorConfig cfg;

    // m=1 cubic: the classical combined expansion
    const auto cubic = random_multipolynomial(cfg_with_seed(22), DegreeSignature::equal(1, 3), 2, 1, false);
    PtList pts{random_point(rng, 2, cfg), random_point(rng, 2, cfg)};
    std::vector<Rational> lams{random_rational(rng, cfg), random_rational(rng, cfg)};
    auto [l1, r1] = expand_combination(cubic, std::span<const V>(pts), std::span<const Rational>(lams));
    CHECK(vec_equal(l1, r1));

    // n=1: multilinear expansion, cross-checked against the multilinear module
    const auto bil = random_multipolynomial(cfg_with_seed(23), DegreeSignature::equal(2, 1), 2, 1, false);
    auto [l2, r2] = expand_combination(bil, std::span<const V>(pts), std::span<const Rational>(lams));
    CHECK(vec_equal(l2, r2));
    const auto A = multilinear_from_multipoly(bil);
    V comb = V::Zero(2);
    for (int j = 0; j < 2; ++j) comb += pts[static_cast<std::size_t>(j)] * lams[static_cast<std::size_t>(j)];
    const PtList diag{comb, comb};
    CHECK(vec_equal(l2, eval(A, std::span<const V>(diag))));

    // d=1 with lambda = 1: both sides reduce to the diagonal value
    const auto P = random_multipolynomial(cfg_with_seed(24), DegreeSignature::equal(2, 2), 2, 1, false);
    const PtList one_pt{random_point(rng, 2, cfg)};
    const std::vector<Rational> one_lam{Rational(1)};
    auto [l3, r3] = expand_combination(P, std::span<const V>(one_pt), std::span<const Rational>(one_lam));
    CHECK(vec_equal(l3, r3));
    CHECK(vec_equal(l3, diag_eval(P, one_pt[0])));

    // the point count is free: three points on a two-dimensional domain
    const auto wide = random_multipolynomial(cfg_with_seed(26), DegreeSignature::equal(2, 2), 2, 1, false);
    PtList three{random_point(rng, 2, cfg), random_point(rng, 2, cfg), random_point(rng, 2, cfg)};
    std::vector<Rational> three_lams{random_rational(rng, cfg), random_rational(rng, cfg),
                                     random_rational(rng, cfg)};
    auto [lw, rw] = expand_combination(wide, std::span<const V>(three), std::span<const Rational>(three_lams));
    CHECK(vec_equal(lw, rw));

    // several shapes, exact equality
    for (const auto& [m, n, d] : std::vector<std::array<int, 3>>{{2, 2, 2}, {3, 2, 2}, {2, 3, 2}, {1, 3, 3}}) {
        const auto Q = random_multipolynomial(cfg_with_seed(25 + static_cast<std::uint64_t>(10 * m + n)),
                                              DegreeSignature::equal(m, n), d, 2, false);
        PtList qpts;
        std::vector<Rational> qlams;
        for (int j = 0; j < d; ++j) {
            qpts.push_back(random_point(rng, d, cfg));
            qlams.push_back(random_rational(rng, cfg));
        }
        auto [lq, rq] = expand_combination(Q, std::span<const V>(qpts), std::span<const Rational>(qlams));
        CHECK(vec_equal(lq, rq));
    }
}

TEST_CASE("remainder function") {
    // n=1: identically zero (M = D)
    for (int m : {2, 3}) {
        const auto P = random_multipolynomial(cfg_with_seed(31 + static_cast<std::uint64_t>(m)),
                                              DegreeSignature::equal(m, 1), 2, 1, false);
        auto rng = Rng(33);
        GeneratorConfig cfg;
        PtList pts;
        for (int i = 0; i < m; ++i) pts.push_back(random_point(rng, 2, cfg));
        CHECK(is_zero_vec(remainder(P, std::span<const V>(pts))));
    }

    // m=1: empty M \ D
    const auto single = random_multipolynomial(cfg_with_seed(34), DegreeSignature::equal(1, 3), 2, 1, false);
    const PtList one{make_point({Rational(2), Rational(-1)})};
    CHECK(is_zero_vec(remainder(single, std::span<const V>(one))));

    // the coordinate-product example at (e1, e2): 16
    const auto P = coordinate_product_poly();
    const PtList basis{e1, e2};
    CHECK(remainder(P, std::span<const V>(basis))[0] == Rational(16));
}

TEST_CASE("multipolynomial polarization formula") {
    const auto P = coordinate_product_poly();
    const PtList basis{e1, e2};
    const V zero = V::Zero(2);

    // sign-sum term alone: 64 / (m!(n!2^n)^m) = 1/2
    const V raw = diagonal_sign_sum(P, zero, std::span<const V>(basis));
    CHECK(raw[0] == Rational(64));
    const Rational lead = Rational(1) / (factorial_scalar(2) * pow_int(factorial_scalar(2) * Rational(4), 2));
    CHECK(raw[0] * lead == Rational(1, 2));

    CHECK(multipolarize(P, zero, std::span<const V>(basis))[0] == Rational(0));
    CHECK(eval(P, std::span<const V>(basis))[0] == Rational(0));
}

TEST_CASE("multipolarize equals eval for random symmetric multipolynomials") {
    auto rng = Rng(41);
    GeneratorConfig cfg;
    for (const auto& [m, n, d] : std::vector<std::array<int, 3>>{{2, 2, 2}, {3, 2, 2}, {2, 3, 2}, {2, 2, 3}}) {
        const auto P = random_multipolynomial(cfg_with_seed(42 + static_cast<std::uint64_t>(10 * m + n)),
                                              DegreeSignature::equal(m, n), d, 1, true);
        PtList pts;
        for (int i = 0; i < m; ++i) pts.push_back(random_point(rng, d, cfg));
        const V direct = eval(P, std::span<const V>(pts));
        CHECK(vec_equal(multipolarize(P, V(V::Zero(d)), std::span<const V>(pts)), direct));
        const V x0 = random_point(rng, d, cfg);
        CHECK(vec_equal(multipolarize(P, x0, std::span<const V>(pts)), direct));
    }

    // two codomain components
    const auto P2 = random_multipolynomial(cfg_with_seed(45), DegreeSignature::equal(2, 2), 2, 2, true);
    PtList pts2{random_point(rng, 2, cfg), random_point(rng, 2, cfg)};
    CHECK(vec_equal(multipolarize(P2, V(V::Zero(2)), std::span<const V>(pts2)),
                    eval(P2, std::span<const V>(pts2))));

    // the largest in-bounds shape: mn = 9
    const auto P9 = random_multipolynomial(cfg_with_seed(46), DegreeSignature::equal(3, 3), 2, 1, true);
    PtList pts9{random_point(rng, 2, cfg), random_point(rng, 2, cfg), random_point(rng, 2, cfg)};
    CHECK(vec_equal(multipolarize(P9, V(V::Zero(2)), std::span<const V>(pts9)),
                    eval(P9, std::span<const V>(pts9))));
}

TEST_CASE("n=1 polarization collapses to the classical formula") {
    auto rng = Rng(51);
    GeneratorConfig cfg;
    for (int m : {2, 3, 4}) {
        const auto P = random_multipolynomial(cfg_with_seed(52 + static_cast<std::uint64_t>(m)),
                                              DegreeSignature::equal(m, 1), 2, 1, true);
        PtList pts;
        for (int i = 0; i < m; ++i) pts.push_back(random_point(rng, 2, cfg));
        const V x0 = random_point(rng, 2, cfg);
        const auto A = multilinear_from_multipoly(P);
        const V classical = polarization_value(hat(A), x0, std::span<const V>(pts));
        CHECK(vec_equal(multipolarize(P, x0, std::span<const V>(pts)), classical));
        CHECK(vec_equal(classical, eval(P, std::span<const V>(pts))));
    }
}

TEST_CASE("diagonal sign sum ignores x0, including asymmetric inputs") {
    auto rng = Rng(61);
    GeneratorConfig cfg;
    const auto P = random_multipolynomial(cfg_with_seed(62), DegreeSignature::equal(2, 2), 2, 2, false);
    PtList pts{random_point(rng, 2, cfg), random_point(rng, 2, cfg)};
    const V x0 = random_point(rng, 2, cfg);
    CHECK(vec_equal(diagonal_sign_sum(P, V(V::Zero(2)), std::span<const V>(pts)),
                    diagonal_sign_sum(P, x0, std::span<const V>(pts))));
}

TEST_CASE("kernel variants agree exactly") {
    auto rng = Rng(71);
    GeneratorConfig cfg;
    for (const auto& [m, n] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}}) {
        const auto P = random_multipolynomial(cfg_with_seed(72 + static_cast<std::uint64_t>(m * 10 + n)),
                                              DegreeSignature::equal(m, n), 2, 1, false);
        PtList pts;
        for (int i = 0; i < m; ++i) pts.push_back(random_point(rng, 2, cfg));
        const V x0 = random_point(rng, 2, cfg);
        const V gray = diagonal_sign_sum(P, x0, std::span<const V>(pts));
        CHECK(vec_equal(gray, diagonal_sign_sum_naive(P, x0, std::span<const V>(pts))));
        for (int threads : {2, 3, 5})
            CHECK(vec_equal(gray, diagonal_sign_sum_partitioned(P, x0, std::span<const V>(pts), threads)));
    }
}

TEST_CASE("entire polarization right side") {
    const auto P = coordinate_product_poly();
    const PtList basis{e1, e2};
    CHECK(entire_polarization_rhs(P, V(V::Zero(2)), std::span<const V>(basis))[0] == Rational(1, 6));

    // on the image of psi the formula is exact, for any x0
    const auto A = random_multilinear(cfg_with_seed(81), 4, 2, 1, true);
    const auto Q = psi(A, 2, 2);
    auto rng = Rng(82);
    GeneratorConfig cfg;
    for (int rep = 0; rep < 3; ++rep) {
        PtList pts{random_point(rng, 2, cfg), random_point(rng, 2, cfg)};
        const V x0 = random_point(rng, 2, cfg);
        CHECK(vec_equal(entire_polarization_rhs(Q, x0, std::span<const V>(pts)),
                        eval(Q, std::span<const V>(pts))));
    }

    // m=1: agrees with the classical polarization value at n equal arguments
    const auto H = random_multipolynomial(cfg_with_seed(83), DegreeSignature::equal(1, 3), 2, 1, false);
    const PtList one{random_point(rng, 2, cfg)};
    const PtList repeated{one[0], one[0], one[0]};
    const V x0 = random_point(rng, 2, cfg);
    CHECK(vec_equal(entire_polarization_rhs(H, x0, std::span<const V>(one)),
                    polarization_value(homogeneous_from_multipoly(H), x0, std::span<const V>(repeated))));
}

TEST_CASE("symmetry of multipolynomials") {
    CHECK(is_symmetric(coordinate_product_poly()));

    // x1^2 y1 with signature (2,1) is nonzero and asymmetric
    Multipolynomial<Rational> P(DegreeSignature(std::vector<int>{2, 1}), 2, 1);
    P.set_coeff(MultiIndexMatrix(2, 2, {2, 0, 1, 0}), scalar_value(Rational(1)));
    CHECK_FALSE(is_symmetric(P));

    // the zero multipolynomial is symmetric for any signature
    const Multipolynomial<Rational> Z(DegreeSignature(std::vector<int>{1, 2}), 2, 1);
    CHECK(is_symmetric(Z));

    const auto S = random_multipolynomial(cfg_with_seed(91), DegreeSignature::equal(2, 2), 2, 1, true);
    CHECK(is_symmetric(S));
    auto T = S;
    MultiIndexMatrix key(2, 2, {2, 0, 0, 2});
    T.add_to_coeff(key, scalar_value(Rational(1)));
    CHECK_FALSE(is_symmetric(T));

    // random nonzero mixed-signature multipolynomials are never symmetric
    for (const auto& sig : {std::vector<int>{1, 2}, std::vector<int>{2, 3}}) {
        const auto R = random_multipolynomial(cfg_with_seed(92), DegreeSignature(sig), 2, 1, false);
        REQUIRE_FALSE(R.is_zero());
        CHECK_FALSE(is_symmetric(R));
    }
}

TEST_CASE("basis coefficients: frozen example and reconstruction") {
    // P(x, y) = x^2 y on Q^1, signature (2,1): c_{111} = 1
    Multipolynomial<Rational> P(DegreeSignature(std::vector<int>{2, 1}), 1, 1);
    P.set_coeff(MultiIndexMatrix(2, 1, {2, 1}), scalar_value(Rational(1)));
    const auto coeffs = basis_coefficients(P);
    REQUIRE(coeffs.size() == 1);
    CHECK(coeffs.begin()->first == std::vector<int>{0, 0, 0});
    CHECK(coeffs.begin()->second[0] == Rational(1));

    // zero multipolynomial: no coefficients
    const Multipolynomial<Rational> Z(DegreeSignature(std::vector<int>{1, 1}), 2, 1);
    CHECK(basis_coefficients(Z).empty());

    // reconstruction reproduces eval for a spread of signatures
    auto rng = Rng(101);
    GeneratorConfig cfg;
    for (const auto& sig :
         {std::vector<int>{1}, std::vector<int>{2}, std::vector<int>{1, 1}, std::vector<int>{2, 1},
          std::vector<int>{2, 2}}) {
        const DegreeSignature signature(sig);
        const auto Q = random_multipolynomial(cfg_with_seed(102), signature, 2, 2, false);
        const auto c = basis_coefficients(Q);
        for (int rep = 0; rep < 20; ++rep) {
            PtList pts;
            for (int j = 0; j < signature.slots(); ++j) pts.push_back(random_point(rng, 2, cfg));
            CHECK(vec_equal(reconstruct_from_basis_coefficients(c, signature, 2, std::span<const V>(pts)),
                            eval(Q, std::span<const V>(pts))));
        }
    }
}

TEST_CASE("basis coefficients of a one-slot polynomial are the polarized map") {
    for (const auto& [n, d] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {3, 1}}) {
        const auto H = random_homogeneous(cfg_with_seed(111 + static_cast<std::uint64_t>(n)), n, d, 1);
        const auto P = multipoly_from_homogeneous(H);
        const auto c = basis_coefficients(P);
        const auto A = polarize(H);
        for (const auto& [key, val] : A.terms()) CHECK(vec_equal(c.at(key), val));
        CHECK(c.size() == A.terms().size());
    }
}

TEST_CASE("diagonal embedding agrees with the multipolynomial on its diagonal") {
    const auto P = coordinate_product_poly();
    const auto A = diagonal_embed(P);
    CHECK(A.arity() == 4);
    CHECK(A.dim() == 4);

    auto rng = Rng(121);
    GeneratorConfig cfg;
    for (int rep = 0; rep < 10; ++rep) {
        PtList pts{random_point(rng, 2, cfg), random_point(rng, 2, cfg)};
        V u = V::Zero(4);
        u[0] = pts[0][0];
        u[1] = pts[0][1];
        u[2] = pts[1][0];
        u[3] = pts[1][1];
        const PtList diag{u};
        CHECK(vec_equal(power_eval(A, std::span<const V>(diag), MultiIndex(std::vector<int>{4})),
                        eval(P, std::span<const V>(pts))));
    }

    // hat of the embedded map is the product of the four coordinates
    const auto hatA = hat(A);
    CHECK(hatA.coeff(MultiIndex(std::vector<int>{1, 1, 1, 1}))[0] == Rational(1));
    CHECK(hatA.terms().size() == 1);

    // one slot: the embedding is the polarized map
    const auto H = random_homogeneous(cfg_with_seed(122), 2, 2, 1);
    const auto single = multipoly_from_homogeneous(H);
    CHECK(diagonal_embed(single) == polarize(H));

    // signature (1,...,1): the embedded map restricted to the diagonal
    // reproduces the original multilinear map's values
    const auto B = random_multilinear(cfg_with_seed(123), 2, 2, 1, false);
    const auto PB = multipoly_from_multilinear(B);
    const auto AB = diagonal_embed(PB);
    for (int rep = 0; rep < 5; ++rep) {
        PtList pts{random_point(rng, 2, cfg), random_point(rng, 2, cfg)};
        V u = V::Zero(4);
        u[0] = pts[0][0];
        u[1] = pts[0][1];
        u[2] = pts[1][0];
        u[3] = pts[1][1];
        const PtList diag{u};
        CHECK(vec_equal(power_eval(AB, std::span<const V>(diag), MultiIndex(std::vector<int>{2})),
                        eval(B, std::span<const V>(pts))));
    }
}

TEST_CASE("psi: trivial cases and the bucketing oracle") {
    // m=2, n=1, dot product: psi(A)(x, y) = x1 y1 + x2 y2
    MultilinearMap<Rational> dot(2, 2, 1);
    dot.set_coeff({0, 0}, scalar_value(Rational(1)));
    dot.set_coeff({1, 1}, scalar_value(Rational(1)));
    const auto Pdot = psi(dot, 2, 1);
    CHECK(Pdot.terms().size() == 2);
    CHECK(Pdot.coeff(MultiIndexMatrix(2, 2, {1, 0, 1, 0}))[0] == Rational(1));
    CHECK(Pdot.coeff(MultiIndexMatrix(2, 2, {0, 1, 0, 1}))[0] == Rational(1));

    // m=1: psi is the diagonal restriction
    const auto A1 = random_multilinear(cfg_with_seed(131), 3, 2, 1, true);
    CHECK(psi(A1, 1, 3) == multipoly_from_homogeneous(hat(A1)));

    // m=n=2 on Q^1: A(w,x,y,z) = wxyz gives x^2 y^2
    MultilinearMap<Rational> prod(4, 1, 1);
    prod.set_coeff({0, 0, 0, 0}, scalar_value(Rational(1)));
    const auto Psq = psi(prod, 2, 2);
    CHECK(Psq.terms().size() == 1);
    CHECK(Psq.coeff(MultiIndexMatrix(2, 1, {2, 2}))[0] == Rational(1));

    // grid-interpolated psi matches the termwise bucketing oracle
    for (std::uint64_t seed : {132ULL, 133ULL, 134ULL}) {
        const auto A = random_multilinear(cfg_with_seed(seed), 4, 2, 2, true);
        CHECK(psi(A, 2, 2) == testing::psi_by_bucketing(A, 2, 2));
    }

    CHECK_THROWS_AS(psi(random_multilinear(cfg_with_seed(135), 4, 2, 1, false), 2, 2), std::domain_error);
    CHECK_THROWS_AS(psi(prod, 2, 1), std::invalid_argument);
}

TEST_CASE("psi is linear and symmetric-valued") {
    const auto A = random_multilinear(cfg_with_seed(141), 4, 2, 1, true);
    const auto B = random_multilinear(cfg_with_seed(142), 4, 2, 1, true);
    const Rational lam(-3, 4);
    CHECK(psi(A + (lam * B), 2, 2) == psi(A, 2, 2) + (lam * psi(B, 2, 2)));
    CHECK(is_symmetric(psi(A, 2, 2)));
}

TEST_CASE("image membership: round trip, counterexample, defect") {
    // members round-trip to their witness
    for (std::uint64_t seed : {151ULL, 152ULL}) {
        const auto A = random_multilinear(cfg_with_seed(seed), 4, 2, 1, true);
        const auto P = psi(A, 2, 2);
        const auto w = in_image_psi(P);
        REQUIRE(w.member);
        CHECK(*w.witness == A);
        CHECK(psi(*w.witness, 2, 2) == P);
    }

    // injectivity via the round trip: psi(A) = 0 only for A = 0
    const MultilinearMap<Rational> zero_map(4, 2, 1);
    const auto Pz = psi(zero_map, 2, 2);
    REQUIRE(Pz.is_zero());
    const auto wz = in_image_psi(Pz);
    CHECK(wz.member);
    CHECK(wz.witness->terms().empty());

    // the coordinate-product example is not in the image; the first defect
    // is the canonical one: x0 = 0, points (e1, e2), sides 0 vs 1/6
    const auto P = coordinate_product_poly();
    const auto w = in_image_psi(P);
    REQUIRE_FALSE(w.member);
    REQUIRE(w.defect.has_value());
    CHECK(is_zero_vec(w.defect->x0));
    CHECK(vec_equal(w.defect->points[0], e1));
    CHECK(vec_equal(w.defect->points[1], e2));
    CHECK(w.defect->lhs[0] == Rational(0));
    CHECK(w.defect->rhs[0] == Rational(1, 6));

    // x^2 y^2 on Q^1 is psi(wxyz): a member
    Multipolynomial<Rational> sq(DegreeSignature::equal(2, 2), 1, 1);
    sq.set_coeff(MultiIndexMatrix(2, 1, {2, 2}), scalar_value(Rational(1)));
    const auto wsq = in_image_psi(sq);
    CHECK(wsq.member);

    // a symmetric member perturbed by a non-member stays outside the image;
    // the recorded defect really separates the two sides
    const auto A2 = random_multilinear(cfg_with_seed(153), 4, 2, 1, true);
    const auto mixed_in = psi(A2, 2, 2) + (Rational(1, 3) * P);
    REQUIRE(is_symmetric(mixed_in));
    const auto wm = in_image_psi(mixed_in);
    REQUIRE_FALSE(wm.member);
    REQUIRE(wm.defect.has_value());
    CHECK(vec_equal(eval(mixed_in, std::span<const V>(wm.defect->points)), wm.defect->lhs));
    CHECK(vec_equal(entire_polarization_rhs(mixed_in, wm.defect->x0, std::span<const V>(wm.defect->points)),
                    wm.defect->rhs));
    CHECK_FALSE(vec_equal(wm.defect->lhs, wm.defect->rhs));

    // preconditions
    Multipolynomial<Rational> asym(DegreeSignature(std::vector<int>{2, 1}), 2, 1);
    asym.set_coeff(MultiIndexMatrix(2, 2, {2, 0, 1, 0}), scalar_value(Rational(1)));
    CHECK_THROWS_AS(in_image_psi(asym), std::domain_error);
}

TEST_CASE("grid interpolation reconstructs multipolynomials exactly") {
    const auto P = random_multipolynomial(cfg_with_seed(161), DegreeSignature(std::vector<int>{2, 1}), 2, 2, false);
    const auto rebuilt = multipolynomial_from_function<Rational>(
        P.signature(), P.dim(), P.codim(),
        [&](std::span<const V> pts) { return eval(P, pts); });
    CHECK(rebuilt == P);

    // a function that is not slot-homogeneous of the stated signature is rejected
    CHECK_THROWS_AS(multipolynomial_from_function<Rational>(
                        DegreeSignature::equal(2, 2), 2, 1,
                        [&](std::span<const V>) { return scalar_value(Rational(1)); }),
                    std::domain_error);
}

TEST_CASE("operations are safe to call concurrently on shared values") {
    const auto P = random_multipolynomial(cfg_with_seed(181), DegreeSignature::equal(2, 2), 2, 1, true);
    auto rng = Rng(182);
    GeneratorConfig cfg;
    const PtList pts{random_point(rng, 2, cfg), random_point(rng, 2, cfg)};
    const V x0 = random_point(rng, 2, cfg);
    const V expected = multipolarize(P, x0, std::span<const V>(pts));

    std::vector<V> results(8, V::Zero(1));
    std::vector<std::thread> pool;
    for (auto& slot : results)
        pool.emplace_back([&, out = &slot] { *out = multipolarize(P, x0, std::span<const V>(pts)); });
    for (auto& t : pool) t.join();
    for (const auto& r : results) CHECK(vec_equal(r, expected));
}

TEST_CASE("conversions between representations") {
    const auto A = random_multilinear(cfg_with_seed(171), 3, 2, 2, false);
    CHECK(multilinear_from_multipoly(multipoly_from_multilinear(A)) == A);

    const auto H = random_homogeneous(cfg_with_seed(172), 3, 2, 2);
    CHECK(homogeneous_from_multipoly(multipoly_from_homogeneous(H)) == H);

    const auto P = random_multipolynomial(cfg_with_seed(173), DegreeSignature::equal(2, 2), 2, 1, false);
    CHECK_THROWS_AS(multilinear_from_multipoly(P), std::domain_error);
}
