#include "fcrystal/errors.hpp"
#include "fcrystal/families.hpp"
#include "fcrystal/fcrystal.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <thread>

using namespace fcrystal;

namespace {

std::vector<Rational> constant_slopes(int n, Rational value) { return std::vector<Rational>(static_cast<std::size_t>(n), value); }

int hodge_below(const SlopeData& sd, const Rational& bound) {
    int count = 0;
    for (int e : sd.hodge)
        if (Rational(e) < bound) ++count;
    return count;
}

int hodge_above(const SlopeData& sd, const Rational& bound) {
    int count = 0;
    for (int e : sd.hodge)
        if (Rational(e) > bound) ++count;
    return count;
}

int sum_of(const ValList& v) {
    int s = 0;
    for (int x : v) s += x;
    return s;
}

// Random crystal with the given Hodge slopes at a precision large enough for
// iterates up to q_max and the Newton computation.
FCrystal random_crystal(long p, int m, std::vector<int> e, int q_max, std::mt19937_64& rng) {
    std::sort(e.begin(), e.end());
    const int n = std::max(q_max * e.back(), m * sum_of(e)) + 4;
    auto ctx = PrimeContext::create(p, m, n);
    return FCrystal::create(testing::random_with_hodge(ctx, e, rng));
}

std::vector<int> random_hodge(std::mt19937_64& rng, int rank, int max_e) {
    std::vector<int> e(static_cast<std::size_t>(rank));
    for (auto& x : e) x = std::uniform_int_distribution<int>(0, max_e)(rng);
    std::sort(e.begin(), e.end());
    return e;
}

}  // namespace

TEST_CASE("create: identity, zero, monomial") {
    auto ctx = PrimeContext::create(3, 1, 10);
    auto id = FCrystal::create(WMatrix::identity(ctx, 3));
    CHECK(id.hodge() == ValList{0, 0, 0});
    CHECK_THROWS_AS(FCrystal::create(WMatrix(ctx, 2, 2)), SingularAtPrecision);
    auto k3 = make_k3_isoclinic(ctx, 3);
    CHECK(sum_of(k3.hodge()) == 3);
    CHECK(k3.hodge() == ValList{0, 1, 2});
}

TEST_CASE("create: declared summands must match the block structure") {
    auto ctx = PrimeContext::create(2, 1, 8);
    auto a = WMatrix::from_integers(ctx, {{1, 0, 0}, {0, 2, 1}, {0, 0, 4}});
    CHECK_NOTHROW(FCrystal::create(a, {1, 2}));
    CHECK_THROWS_AS(FCrystal::create(a, {2, 1}), BadParameters);
    CHECK_THROWS_AS(FCrystal::create(a, {1, 1}), BadParameters);
    auto c = FCrystal::create(a, {1, 2});
    REQUIRE(c.summands().size() == 2);
    CHECK(c.summands()[1].matrix() == a.block(1, 1, 2, 2));
}

TEST_CASE("iterate: examples and cocycle identity") {
    auto ctx = PrimeContext::create(3, 1, 20);
    auto d = FCrystal::create(WMatrix::diagonal_p_powers(ctx, {1, 2}));
    CHECK(d.iterate(1) == d.matrix());
    CHECK(d.iterate(3) == WMatrix::diagonal_p_powers(ctx, {3, 6}));

    std::mt19937_64 rng(31);
    for (auto [p, m] : {std::pair{2L, 3}, std::pair{5L, 2}}) {
        auto c = random_crystal(p, m, {0, 1, 2}, 8, rng);
        for (int q1 = 1; q1 <= 4; ++q1)
            for (int q2 = 1; q2 <= 4; ++q2)
                CHECK(c.iterate(q1 + q2) == c.iterate(q1) * sigma_twist(c.iterate(q2), q1));
        // A fresh copy, filled in a different order, gives the same matrices.
        auto fresh = FCrystal::create(c.matrix());
        CHECK(fresh.iterate(7) == c.iterate(7));
        WMatrix direct = c.matrix();
        for (int k = 1; k < 5; ++k) direct = direct * sigma_twist(c.matrix(), k);
        CHECK(fresh.iterate(5) == direct);
    }
}

TEST_CASE("iterate: insufficient precision is refused") {
    auto ctx = PrimeContext::create(2, 1, 8);
    auto c = FCrystal::create(WMatrix::diagonal_p_powers(ctx, {0, 3}));
    CHECK_NOTHROW(c.iterate(2));
    CHECK_THROWS_AS(c.iterate(3), PrecisionExhausted);
    try {
        c.iterate(3);
    } catch (const PrecisionExhausted& e) {
        CHECK(e.needed() == 11);
    }
}

TEST_CASE("iterate: concurrent fills agree") {
    std::mt19937_64 rng(32);
    auto c = random_crystal(3, 2, {0, 1, 1, 2}, 12, rng);
    auto reference = FCrystal::create(c.matrix());
    std::vector<WMatrix> got(4);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&, t] { got[static_cast<std::size_t>(t)] = c.iterate(9 + t % 2); });
    for (auto& th : threads) th.join();
    for (int t = 0; t < 4; ++t) CHECK(got[static_cast<std::size_t>(t)] == reference.iterate(9 + t % 2));
}

TEST_CASE("slope data: examples") {
    for (long p : {2L, 3L}) {
        auto ctx = PrimeContext::create(p, 1, 20);
        const auto cyc = make_cyclic(ctx, {0, 1, 2}).slope_data();
        CHECK(cyc.hodge == ValList{0, 1, 2});
        CHECK(cyc.newton == constant_slopes(3, Rational(1)));
        CHECK(cyc.isoclinic);
        CHECK(cyc.lambda == Rational(1));
        CHECK(!cyc.ordinary);
        CHECK(cyc.hodge_numbers == std::map<int, int>{{0, 1}, {1, 1}, {2, 1}});

        for (auto [a, b] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}}) {
            WMatrix mat(ctx, 2, 2);
            mat(0, 0) = WittApprox::p_power(ctx, a);
            mat(0, 1) = WittApprox::from_integer(ctx, 1);
            mat(1, 1) = WittApprox::p_power(ctx, b);
            const auto sd = FCrystal::create(mat).slope_data();
            CHECK(sd.newton == std::vector<Rational>{Rational(a), Rational(b)});
            CHECK(!sd.isoclinic);
            CHECK(!sd.lambda);
        }

        const auto id = FCrystal::create(WMatrix::identity(ctx, 4)).slope_data();
        CHECK(id.hodge == ValList{0, 0, 0, 0});
        CHECK(id.newton == constant_slopes(4, Rational(0)));
        CHECK(id.isoclinic);
        CHECK(id.ordinary);
    }
}

TEST_CASE("slope data: Newton slopes over an extension use the m-th iterate") {
    // diag(1, p^2) composed with a swap: phi^2 = p^2 on each basis vector.
    auto ctx = PrimeContext::create(3, 2, 16);
    auto c = make_cyclic(ctx, {0, 2});
    CHECK(c.slope_data().newton == constant_slopes(2, Rational(1)));
    auto c3 = make_cyclic(PrimeContext::create(2, 3, 20), {0, 1, 1});
    CHECK(c3.slope_data().newton == constant_slopes(3, Rational(2, 3)));
}

TEST_CASE("slope data: Mazur inequality and endpoint on random crystals") {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 25; ++i) {
        const long p = i % 2 ? 2 : 5;
        const int m = 1 + i % 3;
        auto c = random_crystal(p, m, random_hodge(rng, 4, 3), 1, rng);
        const auto& sd = c.slope_data();
        Rational hodge_partial(0), newton_partial(0);
        for (std::size_t k = 0; k < sd.newton.size(); ++k) {
            hodge_partial += Rational(sd.hodge[k]);
            newton_partial += sd.newton[k];
            CHECK(newton_partial >= hodge_partial);
        }
        CHECK(newton_partial == hodge_partial);
        int h_total = 0;
        for (auto [slope, count] : sd.hodge_numbers) {
            CHECK(count == std::count(sd.hodge.begin(), sd.hodge.end(), slope));
            h_total += count;
        }
        CHECK(h_total == sd.rank());
        CHECK(sd.ordinary == (sd.min_hodge() == sd.max_hodge()));
    }
}

TEST_CASE("alpha beta delta: examples") {
    auto ctx = PrimeContext::create(5, 1, 40);
    auto c2 = make_cyclic(ctx, {0, 3});
    CHECK(c2.alpha_beta_delta(1) == AlphaBetaDelta{1, 0, 3, 3});
    CHECK(c2.alpha_beta_delta(2) == AlphaBetaDelta{2, 3, 3, 0});
    auto c3 = make_cyclic(ctx, {0, 1, 5});
    CHECK(c3.alpha_beta_delta(2) == AlphaBetaDelta{2, 1, 6, 5});
}

TEST_CASE("alpha beta delta: super/subadditivity, determinant and slope sandwich") {
    std::mt19937_64 rng(34);
    for (int i = 0; i < 12; ++i) {
        const int m = 1 + i % 2;
        auto c = random_crystal(i % 3 == 0 ? 3 : 2, m, random_hodge(rng, 3, 3), 8, rng);
        const auto& sd = c.slope_data();
        for (int q = 1; q <= 8; ++q) {
            CHECK(sum_of(elementary_divisor_valuations(c.iterate(q))) == q * sd.hodge_sum());
            const auto x = c.alpha_beta_delta(q);
            CHECK(x.delta == x.beta - x.alpha);
            CHECK(x.alpha >= 0);
            // Newton slopes lie between alpha/q and beta/q.
            CHECK(Rational(x.alpha, q) <= sd.newton.front());
            CHECK(sd.newton.back() <= Rational(x.beta, q));
        }
        for (int q1 = 1; q1 <= 4; ++q1)
            for (int q2 = 1; q2 <= 4; ++q2) {
                CHECK(c.alpha_beta_delta(q1 + q2).alpha >= c.alpha_beta_delta(q1).alpha + c.alpha_beta_delta(q2).alpha);
                CHECK(c.alpha_beta_delta(q1 + q2).beta <= c.alpha_beta_delta(q1).beta + c.alpha_beta_delta(q2).beta);
            }
    }
}

TEST_CASE("isoclinic crystals: sandwich, equality criterion and slope estimate") {
    std::vector<FCrystal> crystals;
    auto ctx = PrimeContext::create(2, 1, 80);
    crystals.push_back(make_cyclic(ctx, {0, 1, 5}));
    crystals.push_back(make_cyclic(ctx, {0, 0, 2, 3}));
    crystals.push_back(make_k3_isoclinic(ctx, 5));
    crystals.push_back(make_supersingular_like(ctx, 2, 3));
    crystals.push_back(make_permutational(ctx, {{2, 0, 1}, {1, 1, 1}}));
    std::mt19937_64 rng(35);
    // U * phi0 * sigma(U)^{-1}-style conjugates are still isoclinic; use a
    // random unimodular change of basis on a cyclic crystal (m = 1).
    {
        auto base = make_cyclic(ctx, {0, 2, 2});
        auto u = testing::random_unimodular(ctx, 3, rng);
        const auto sd = smith_decompose(u, true);
        WMatrix dinv(ctx, 3, 3);
        for (int i = 0; i < 3; ++i) dinv(i, i) = sd.units[static_cast<std::size_t>(i)].unit_inverse();
        crystals.push_back(FCrystal::create(u * base.matrix() * (sd.right * dinv * sd.left)));
    }
    for (const auto& c : crystals) {
        const auto& sd = c.slope_data();
        REQUIRE(sd.isoclinic);
        const Rational lambda = *sd.lambda;
        CHECK(lambda == Rational(sd.hodge_sum(), sd.rank()));
        for (int q = 1; q <= 10; ++q) {
            const auto x = c.alpha_beta_delta(q);
            const Rational ql = Rational(q) * lambda;
            CHECK(Rational(x.alpha) <= ql);
            CHECK(ql <= Rational(x.beta));
            CHECK((Rational(x.alpha) == ql) == (Rational(x.beta) == ql));
        }
        const int below = hodge_below(sd, lambda);
        for (int n = 1; n <= 8; ++n) CHECK(Rational(c.alpha_beta_delta(n + below).alpha) >= Rational(ceil(Rational(n) * lambda)));
    }
}

TEST_CASE("rescale: examples and delta invariance") {
    auto ctx = PrimeContext::create(3, 1, 20);
    auto id = FCrystal::create(WMatrix::identity(ctx, 3));
    CHECK(id.rescale(0).matrix() == id.matrix());
    CHECK(id.rescale(1).hodge() == ValList{1, 1, 1});
    CHECK_THROWS_AS(id.rescale(-1), NonIntegralRescale);
    CHECK(make_cyclic(ctx, {2, 3}).rescale(-2).hodge() == ValList{0, 1});

    std::mt19937_64 rng(36);
    for (int i = 0; i < 8; ++i) {
        auto c = random_crystal(2, 1 + i % 2, random_hodge(rng, 3, 2), 12, rng);
        auto shifted = c.rescale(1);
        for (int q = 1; q <= 5; ++q) {
            const auto a = c.alpha_beta_delta(q);
            const auto b = shifted.alpha_beta_delta(q);
            CHECK(b.delta == a.delta);
            CHECK(b.alpha == a.alpha + q);
            CHECK(b.beta == a.beta + q);
        }
    }
}

TEST_CASE("dual: identity, Hodge reflection and alpha/beta duality") {
    auto ctx = PrimeContext::create(5, 1, 10);
    auto id = FCrystal::create(WMatrix::identity(ctx, 3));
    CHECK(id.dual_twisted().matrix() == WMatrix::identity(id.dual_twisted().context(), 3));

    std::mt19937_64 rng(37);
    for (int i = 0; i < 15; ++i) {
        const long p = std::vector<long>{2, 3, 5}[static_cast<std::size_t>(i % 3)];
        const int m = 1 + i % 2;
        auto hodge = random_hodge(rng, 3, 3);
        hodge.front() = 0;
        std::sort(hodge.begin(), hodge.end());
        const int e = hodge.back();
        auto ctx_big = PrimeContext::create(p, m, 7 * e + m * 3 * e + 6);
        auto lifted = FCrystal::create(testing::random_with_hodge(ctx_big, hodge, rng));
        auto dual = lifted.dual_twisted();
        CHECK(dual.context()->precision() == ctx_big->precision() - e);
        ValList reflected;
        for (int x : hodge) reflected.push_back(e - x);
        std::sort(reflected.begin(), reflected.end());
        CHECK(dual.hodge() == reflected);
        for (int q = 1; q <= 6; ++q) {
            CHECK(lifted.alpha_beta_delta(q).alpha + dual.alpha_beta_delta(q).beta == q * e);
            CHECK(dual.alpha_beta_delta(q).alpha + lifted.alpha_beta_delta(q).beta == q * e);
        }
        const auto& sd = lifted.slope_data();
        const auto& sdd = dual.slope_data();
        for (Rational lambda : {Rational(1, 2), Rational(1), Rational(3, 2)}) {
            if (!(lambda < Rational(e))) continue;
            CHECK(hodge_below(sdd, Rational(e) - lambda) == hodge_above(sd, lambda));
        }
    }
}

TEST_CASE("direct sum: singleton, Hodge merge, Newton union") {
    auto ctx = PrimeContext::create(3, 1, 30);
    auto a = make_cyclic(ctx, {0, 1});
    auto single = direct_sum({a});
    CHECK(single.matrix() == a.matrix());
    CHECK(!single.has_summands());

    WMatrix r2(ctx, 2, 2);
    r2(0, 0) = WittApprox::p_power(ctx, 1);
    r2(0, 1) = WittApprox::one(ctx);
    r2(1, 1) = WittApprox::p_power(ctx, 2);
    auto b = FCrystal::create(r2);
    auto sum = direct_sum({a, b});
    CHECK(sum.has_summands());
    CHECK(sum.summand_sizes() == std::vector<int>{2, 2});
    ValList merged = a.hodge();
    merged.insert(merged.end(), b.hodge().begin(), b.hodge().end());
    std::sort(merged.begin(), merged.end());
    CHECK(sum.hodge() == merged);
    CHECK(sum.slope_data().newton == std::vector<Rational>{Rational(1, 2), Rational(1, 2), Rational(1), Rational(2)});

    auto nested = direct_sum({sum, make_cyclic(ctx, {1})});
    CHECK(nested.summand_sizes() == std::vector<int>{2, 2, 1});
    CHECK_THROWS_AS(direct_sum({a, make_cyclic(PrimeContext::create(3, 1, 31), {0})}), ContextMismatch);
}

TEST_CASE("detect_period: examples") {
    auto ctx = PrimeContext::create(2, 1, 60);
    CHECK(make_cyclic(ctx, {0, 1, 2}).detect_period(6) == Period{3, 3});
    CHECK(FCrystal::create(WMatrix::identity(ctx, 3)).detect_period(4) == Period{1, 0});
    WMatrix r2(ctx, 2, 2);
    r2(0, 0) = WittApprox::p_power(ctx, 1);
    r2(0, 1) = WittApprox::one(ctx);
    r2(1, 1) = WittApprox::p_power(ctx, 2);
    CHECK(!FCrystal::create(r2).detect_period(8));
    // The period makes delta periodic and s_T = T * (sum e) / r.
    auto c = make_cyclic(ctx, {0, 1, 1, 4});
    auto period = c.detect_period(8);
    REQUIRE(period);
    CHECK(period->s * 4 == period->length * 6);
    for (int q = 1; q <= 4; ++q) CHECK(c.alpha_beta_delta(q + period->length).delta == c.alpha_beta_delta(q).delta);
}

TEST_CASE("monomial split: cycles become declared summands") {
    auto ctx = PrimeContext::create(2, 1, 30);
    auto c = make_permutational(ctx, {{3, 2, 1, 0}, {0, 0, 0, 5}});
    auto perm = c.monomial_permutation();
    REQUIRE(perm);
    CHECK(*perm == std::vector<int>{3, 2, 1, 0});
    auto split = c.split_monomial_cycles();
    REQUIRE(split);
    CHECK(split->summand_sizes() == std::vector<int>{2, 2});
    CHECK(split->hodge() == c.hodge());
    CHECK(!make_cyclic(ctx, {0, 1, 2}).split_monomial_cycles());
    WMatrix dense = WMatrix::from_integers(ctx, {{1, 1}, {0, 1}});
    CHECK(!FCrystal::create(dense).monomial_permutation());
}
