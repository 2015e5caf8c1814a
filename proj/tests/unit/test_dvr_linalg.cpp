#include "fcrystal/dvr_linalg.hpp"
#include "fcrystal/errors.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace fcrystal;

namespace {

PolyVal poly_from_integers(const Context& ctx, const std::vector<long>& low_to_high) {
    PolyVal pv;
    for (long c : low_to_high) {
        pv.coeffs.push_back(WittApprox::from_integer(ctx, c));
        pv.vals.push_back(pv.coeffs.back().valuation());
    }
    return pv;
}

std::vector<Rational> rationals(std::initializer_list<std::pair<int, int>> xs) {
    std::vector<Rational> out;
    for (auto [n, d] : xs) out.emplace_back(n, d);
    return out;
}

// Matrix product through the independent polynomial model.
WMatrix oracle_product(const WMatrix& a, const WMatrix& b) {
    const auto& ctx = a.context();
    WMatrix out(ctx, a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            testing::Poly acc{0};
            for (int k = 0; k < a.cols(); ++k) {
                auto term = testing::poly_mul(a(i, k).coeffs(), b(k, j).coeffs());
                if (acc.size() < term.size()) acc.resize(term.size(), 0);
                for (std::size_t t = 0; t < term.size(); ++t) acc[t] += term[t];
            }
            out(i, j) = WittApprox(ctx, testing::poly_reduce(acc, ctx->modulus(), ctx->modulus_pn()));
        }
    return out;
}

int det_valuation_m1(const WMatrix& a) {
    const mpz_class det = oracles::determinant(testing::to_integers(a));
    return padic_valuation(testing::mod_nonneg(det, a.context()->modulus_pn()), a.context()->prime(), a.context()->precision());
}

}  // namespace

TEST_CASE("multiply: identities and diagonal products") {
    std::mt19937_64 rng(21);
    auto ctx = PrimeContext::create(3, 2, 8);
    auto a = testing::random_matrix(ctx, 3, rng);
    CHECK(a * WMatrix::identity(ctx, 3) == a);
    CHECK(WMatrix::identity(ctx, 3) * a == a);
    auto p5 = PrimeContext::create(5, 1, 6);
    CHECK(WMatrix::diagonal_p_powers(p5, {1, 0}) * WMatrix::diagonal_p_powers(p5, {0, 1}) == WMatrix::diagonal_p_powers(p5, {1, 1}));
}

TEST_CASE("multiply: random products agree with the polynomial model") {
    std::mt19937_64 rng(22);
    for (auto [p, m] : {std::pair{2L, 2}, std::pair{3L, 3}, std::pair{5L, 1}}) {
        auto ctx = PrimeContext::create(p, m, 10);
        for (int i = 0; i < 10; ++i) {
            auto a = testing::random_matrix(ctx, 3, rng);
            auto b = testing::random_matrix(ctx, 3, rng);
            CHECK(a * b == oracle_product(a, b));
        }
    }
}

TEST_CASE("multiply: shape and context errors") {
    auto ctx = PrimeContext::create(2, 1, 5);
    CHECK_THROWS_AS(WMatrix(ctx, 2, 3) * WMatrix(ctx, 2, 3), DimensionMismatch);
    CHECK_THROWS_AS(WMatrix::identity(ctx, 2) * WMatrix::identity(PrimeContext::create(2, 1, 6), 2), ContextMismatch);
}

TEST_CASE("sigma_twist: degree one, full period, composition") {
    std::mt19937_64 rng(23);
    auto ctx1 = PrimeContext::create(5, 1, 6);
    auto a1 = testing::random_matrix(ctx1, 3, rng);
    CHECK(sigma_twist(a1, 1) == a1);
    CHECK(sigma_twist(a1, 4) == a1);
    auto ctx = PrimeContext::create(2, 3, 8);
    auto a = testing::random_matrix(ctx, 3, rng);
    CHECK(sigma_twist(a, 3) == a);
    CHECK(sigma_twist(sigma_twist(a, 1), 1) == sigma_twist(a, 2));
    CHECK(!(sigma_twist(a, 1) == a));
    auto b = testing::random_matrix(ctx, 3, rng);
    CHECK(sigma_twist(a * b, 1) == sigma_twist(a, 1) * sigma_twist(b, 1));
}

TEST_CASE("smith: examples") {
    auto ctx = PrimeContext::create(5, 1, 10);
    CHECK(elementary_divisor_valuations(WMatrix::diagonal_p_powers(ctx, {0, 1, 3})) == ValList{0, 1, 3});
    CHECK(elementary_divisor_valuations(WMatrix::from_integers(ctx, {{0, 125}, {1, 0}})) == ValList{0, 3});
    CHECK(elementary_divisor_valuations(WMatrix::diagonal_p_powers(ctx, {4, 0, 2})) == ValList{0, 2, 4});
    CHECK(elementary_divisor_valuations(WMatrix::from_integers(ctx, {{5, 1}, {0, 25}})) == ValList{0, 3});
}

TEST_CASE("smith: singular and precision errors") {
    auto ctx = PrimeContext::create(2, 1, 6);
    CHECK_THROWS_AS(elementary_divisor_valuations(WMatrix(ctx, 2, 2)), SingularAtPrecision);
    CHECK_THROWS_AS(elementary_divisor_valuations(WMatrix::from_integers(ctx, {{1, 1}, {1, 1}})), SingularAtPrecision);
    // A divisor of valuation N-1 can not be certified.
    CHECK_THROWS_AS(elementary_divisor_valuations(WMatrix::diagonal_p_powers(ctx, {0, 5})), PrecisionExhausted);
    CHECK(elementary_divisor_valuations(WMatrix::diagonal_p_powers(ctx, {0, 4})) == ValList{0, 4});
}

TEST_CASE("smith: invariant under unimodular multiplication and permutations") {
    std::mt19937_64 rng(24);
    for (auto [p, m] : {std::pair{2L, 1}, std::pair{3L, 2}, std::pair{7L, 1}}) {
        auto ctx = PrimeContext::create(p, m, 20);
        for (int i = 0; i < 15; ++i) {
            std::vector<int> e(4);
            for (auto& x : e) x = std::uniform_int_distribution<int>(0, 4)(rng);
            auto a = testing::random_with_hodge(ctx, e, rng);
            std::sort(e.begin(), e.end());
            CHECK(elementary_divisor_valuations(a) == e);
            auto b = a;
            b.swap_rows(0, 3);
            b.swap_cols(1, 2);
            CHECK(elementary_divisor_valuations(b) == e);
            CHECK(elementary_divisor_valuations(testing::random_unimodular(ctx, 4, rng) * a) == e);
        }
    }
}

TEST_CASE("smith: sum of divisors equals det valuation and matches the minors oracle") {
    std::mt19937_64 rng(25);
    for (long p : {2L, 3L}) {
        auto ctx = PrimeContext::create(p, 1, 40);
        for (int i = 0; i < 20; ++i) {
            WMatrix a(ctx, 4, 4);
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) a(r, c) = WittApprox::from_integer(ctx, std::uniform_int_distribution<long>(-20, 20)(rng));
            const auto minors = oracles::determinantal_divisor_valuations(testing::to_integers(a), p);
            if (minors.empty()) continue;
            const auto vals = elementary_divisor_valuations(a);
            CHECK(vals == minors);
            int sum = 0;
            for (int v : vals) sum += v;
            CHECK(sum == det_valuation_m1(a));
        }
    }
}

TEST_CASE("smith: decomposition reproduces the diagonal form") {
    std::mt19937_64 rng(26);
    auto ctx = PrimeContext::create(3, 2, 16);
    auto a = testing::random_with_hodge(ctx, {0, 1, 1, 3}, rng);
    const auto sd = smith_decompose(a, true);
    WMatrix diag(ctx, 4, 4);
    for (int i = 0; i < 4; ++i) diag(i, i) = sd.units[static_cast<std::size_t>(i)].times_p_power(sd.vals[static_cast<std::size_t>(i)].value());
    CHECK(sd.left * a * sd.right == diag);
}

TEST_CASE("scaled_inverse: A * (p^t A^{-1}) = p^t I") {
    std::mt19937_64 rng(27);
    auto ctx = PrimeContext::create(5, 2, 14);
    for (int i = 0; i < 5; ++i) {
        auto a = testing::random_with_hodge(ctx, {0, 1, 2}, rng);
        for (int t : {2, 3}) {
            auto inv = scaled_inverse(a, t);
            CHECK(inv.context()->precision() == 14 + t - 4);
            auto small = inv.context();
            CHECK(a.reduced_to(small) * inv == WMatrix::identity(small, 3).times_p_power(t));
            CHECK(inv * a.reduced_to(small) == WMatrix::identity(small, 3).times_p_power(t));
        }
    }
}

TEST_CASE("char_poly: examples") {
    auto ctx = PrimeContext::create(3, 1, 10);
    auto pv = char_poly(WMatrix::diagonal_p_powers(ctx, {1, 2}));
    REQUIRE(pv.degree() == 2);
    CHECK(pv.coeffs[2] == WittApprox::one(ctx));
    CHECK(pv.coeffs[1] == WittApprox::from_integer(ctx, -(3 + 9)));
    CHECK(pv.coeffs[0] == WittApprox::from_integer(ctx, 27));
    CHECK(pv.vals[1] == Valuation::exact(1));
    CHECK(pv.vals[0] == Valuation::exact(3));
    auto nil = char_poly(WMatrix::from_integers(ctx, {{0, 1}, {0, 0}}));
    CHECK(nil.coeffs[0].is_zero());
    CHECK(nil.coeffs[1].is_zero());
    CHECK(nil.vals[0] == Valuation::at_least(10));
}

TEST_CASE("char_poly: random matrices agree with cofactor expansion") {
    std::mt19937_64 rng(28);
    for (long p : {2L, 5L})
        for (int n : {2, 3, 4}) {
            auto ctx = PrimeContext::create(p, 1, 12);
            for (int i = 0; i < 8; ++i) {
                auto a = testing::random_matrix(ctx, n, rng);
                const auto expected = oracles::characteristic_polynomial(testing::to_integers(a));
                const auto pv = char_poly(a);
                REQUIRE(pv.coeffs.size() == expected.size());
                for (std::size_t k = 0; k < expected.size(); ++k)
                    CHECK(pv.coeffs[k].coeffs()[0] == testing::mod_nonneg(expected[k], ctx->modulus_pn()));
            }
        }
}

TEST_CASE("char_poly: conjugation invariance over extensions") {
    std::mt19937_64 rng(29);
    auto ctx = PrimeContext::create(3, 2, 12);
    auto a = testing::random_matrix(ctx, 3, rng);
    auto u = testing::random_unimodular(ctx, 3, rng);
    const auto sd = smith_decompose(u, true);
    // u^{-1} = right * diag(units^{-1}) * left, all divisors being units.
    WMatrix dinv(ctx, 3, 3);
    for (int i = 0; i < 3; ++i) dinv(i, i) = sd.units[static_cast<std::size_t>(i)].unit_inverse();
    auto uinv = sd.right * dinv * sd.left;
    REQUIRE(u * uinv == WMatrix::identity(ctx, 3));
    CHECK(char_poly(u * a * uinv).coeffs == char_poly(a).coeffs);
}

TEST_CASE("newton polygon: examples") {
    auto ctx = PrimeContext::create(2, 1, 12);
    CHECK(newton_polygon_slopes(poly_from_integers(ctx, {-8, 0, 0, 1}), 1) == rationals({{1, 1}, {1, 1}, {1, 1}}));
    CHECK(newton_polygon_slopes(poly_from_integers(ctx, {8, -2, 1}), 1) == rationals({{1, 1}, {2, 1}}));
    CHECK(newton_polygon_slopes(poly_from_integers(ctx, {-8, 0, 1}), 1) == rationals({{3, 2}, {3, 2}}));
    CHECK(newton_polygon_slopes(poly_from_integers(ctx, {-8, 0, 1}), 3) == rationals({{1, 2}, {1, 2}}));
    CHECK_THROWS_AS(newton_polygon_slopes(poly_from_integers(ctx, {0, 0, 1}), 1), PrecisionExhausted);
}

TEST_CASE("newton polygon: slopes sum to det valuation and lie above Hodge") {
    std::mt19937_64 rng(30);
    auto ctx = PrimeContext::create(5, 1, 24);
    for (int i = 0; i < 20; ++i) {
        std::vector<int> e(4);
        for (auto& x : e) x = std::uniform_int_distribution<int>(0, 3)(rng);
        auto a = testing::random_with_hodge(ctx, e, rng);
        const auto slopes = newton_polygon_slopes(char_poly(a), 1);
        std::sort(e.begin(), e.end());
        Rational hodge_partial(0), newton_partial(0);
        for (std::size_t k = 0; k < slopes.size(); ++k) {
            newton_partial += slopes[k];
            hodge_partial += Rational(e[k]);
            CHECK(newton_partial >= hodge_partial);
        }
        CHECK(newton_partial == hodge_partial);
        CHECK(std::is_sorted(slopes.begin(), slopes.end()));
    }
}
