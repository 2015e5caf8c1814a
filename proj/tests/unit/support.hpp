#pragma once

// Test helpers: random elements and matrices, and a schoolbook integer
// polynomial model of (Z/p^N)[x]/(f) that is independent of the library kernel.

#include "fcrystal/dvr_linalg.hpp"
#include "fcrystal/fcrystal.hpp"
#include "fcrystal/oracles.hpp"

#include <random>
#include <vector>

namespace testing {

using fcrystal::Context;
using fcrystal::WittApprox;
using fcrystal::WMatrix;
using Poly = std::vector<mpz_class>;

inline mpz_class pow_p(long p, int k) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return out;
}

inline mpz_class mod_nonneg(const mpz_class& a, const mpz_class& n) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// Remainder modulo a monic f, then coefficients reduced mod n; result has
// exactly deg f coefficients.
inline Poly poly_reduce(Poly a, const Poly& f, const mpz_class& n) {
    const std::size_t m = f.size() - 1;
    for (std::size_t k = a.size(); k-- > m;) {
        const mpz_class lead = a[k];
        if (lead == 0) continue;
        for (std::size_t i = 0; i <= m; ++i) a[k - m + i] -= lead * f[i];
    }
    a.resize(m, 0);
    for (auto& c : a) c = mod_nonneg(c, n);
    return a;
}

// g(h(x)) mod (f, n) by Horner.
inline Poly poly_compose(const Poly& g, const Poly& h, const Poly& f, const mpz_class& n) {
    Poly acc{0};
    for (std::size_t k = g.size(); k-- > 0;) {
        acc = poly_mul(acc, h);
        acc[0] += g[k];
        acc = poly_reduce(acc, f, n);
    }
    return poly_reduce(acc, f, n);
}

inline WittApprox random_element(const Context& ctx, std::mt19937_64& rng, int min_val = 0) {
    std::vector<mpz_class> c(static_cast<std::size_t>(ctx->degree()));
    std::uniform_int_distribution<unsigned long> dist(0, 1000000);
    for (auto& x : c) x = mpz_class(dist(rng)) * pow_p(ctx->p(), min_val);
    return WittApprox(ctx, c);
}

inline WittApprox random_unit(const Context& ctx, std::mt19937_64& rng) {
    for (;;) {
        WittApprox u = random_element(ctx, rng);
        if (u.valuation() == fcrystal::Valuation::exact(0)) return u;
    }
}

inline WMatrix random_matrix(const Context& ctx, int n, std::mt19937_64& rng) {
    WMatrix a(ctx, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = random_element(ctx, rng);
    return a;
}

// Product of a unit lower-triangular, a unit upper-triangular and a random
// permutation: determinant is a unit.
inline WMatrix random_unimodular(const Context& ctx, int n, std::mt19937_64& rng) {
    WMatrix lower = WMatrix::identity(ctx, n);
    WMatrix upper = WMatrix::identity(ctx, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i > j) lower(i, j) = random_element(ctx, rng);
            if (i < j) upper(i, j) = random_element(ctx, rng);
            if (i == j) upper(i, j) = random_unit(ctx, rng);
        }
    WMatrix out = lower * upper;
    for (int i = n - 1; i > 0; --i) {
        std::uniform_int_distribution<int> pick(0, i);
        out.swap_rows(i, pick(rng));
    }
    return out;
}

// U * diag(p^{e}) * V with U, V unimodular: a crystal with Hodge slopes e.
inline WMatrix random_with_hodge(const Context& ctx, const std::vector<int>& e, std::mt19937_64& rng) {
    const int n = static_cast<int>(e.size());
    return random_unimodular(ctx, n, rng) * WMatrix::diagonal_p_powers(ctx, e) * random_unimodular(ctx, n, rng);
}

// Integer matrix (m = 1 contexts) for the GMP oracles.
inline fcrystal::oracles::IntMatrix to_integers(const WMatrix& a) {
    fcrystal::oracles::IntMatrix out(static_cast<std::size_t>(a.rows()));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out[static_cast<std::size_t>(i)].push_back(a(i, j).coeffs()[0]);
    return out;
}

}  // namespace testing
