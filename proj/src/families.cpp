#include "fcrystal/families.hpp"

#include "fcrystal/errors.hpp"

#include <algorithm>
#include <random>

namespace fcrystal {

void validate(const PermSpec& spec) {
    const auto r = spec.pi.size();
    if (r == 0) throw BadParameters("empty permutation");
    if (spec.e.size() != r)
        throw BadParameters("permutation has " + std::to_string(r) + " entries but e has " +
                            std::to_string(spec.e.size()));
    std::vector<bool> hit(r, false);
    for (int x : spec.pi) {
        if (x < 0 || static_cast<std::size_t>(x) >= r || hit[static_cast<std::size_t>(x)])
            throw BadParameters("pi is not a permutation");
        hit[static_cast<std::size_t>(x)] = true;
    }
    if (spec.e.front() < 0) throw BadParameters("exponents must be nonnegative");
    if (!std::is_sorted(spec.e.begin(), spec.e.end())) throw BadParameters("exponents must be nondecreasing");
}

std::vector<std::vector<int>> permutation_cycles(const std::vector<int>& pi) {
    std::vector<bool> seen(pi.size(), false);
    std::vector<std::vector<int>> out;
    for (std::size_t start = 0; start < pi.size(); ++start) {
        if (seen[start]) continue;
        std::vector<int> cycle;
        for (auto j = start; !seen[j]; j = static_cast<std::size_t>(pi[j])) {
            seen[j] = true;
            cycle.push_back(static_cast<int>(j));
        }
        out.push_back(std::move(cycle));
    }
    return out;
}

bool is_single_cycle(const std::vector<int>& pi) { return permutation_cycles(pi).size() == 1; }

std::vector<int> full_cycle(int r) {
    std::vector<int> pi(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) pi[static_cast<std::size_t>(i)] = (i + 1) % r;
    return pi;
}

WMatrix monomial_matrix(const Context& ctx, const std::vector<int>& pi, const std::vector<int>& exponents) {
    const int r = static_cast<int>(pi.size());
    WMatrix a(ctx, r, r);
    for (int i = 0; i < r; ++i)
        a(pi[static_cast<std::size_t>(i)], i) = WittApprox::p_power(ctx, exponents[static_cast<std::size_t>(i)]);
    return a;
}

FCrystal make_permutational(const Context& ctx, const PermSpec& spec) {
    validate(spec);
    return FCrystal::create(monomial_matrix(ctx, spec.pi, spec.e));
}

FCrystal make_cyclic(const Context& ctx, const std::vector<int>& e) {
    return make_permutational(ctx, PermSpec{full_cycle(static_cast<int>(e.size())), e});
}

AlphaBetaDelta permutational_window_oracle(const PermSpec& spec, int q) {
    validate(spec);
    if (q < 1) throw BadParameters("q must be >= 1");
    AlphaBetaDelta out;
    out.q = q;
    bool first = true;
    for (std::size_t l = 0; l < spec.pi.size(); ++l) {
        int sum = 0;
        auto j = l;
        for (int i = 0; i < q; ++i) {
            sum += spec.e[j];
            j = static_cast<std::size_t>(spec.pi[j]);
        }
        if (first || sum < out.alpha) out.alpha = sum;
        if (first || sum > out.beta) out.beta = sum;
        first = false;
    }
    out.delta = out.beta - out.alpha;
    return out;
}

AlphaBetaDelta cyclic_window_oracle(const PermSpec& spec, int q) {
    validate(spec);
    if (!is_single_cycle(spec.pi)) throw NotACycle("permutation is not a single cycle");
    return permutational_window_oracle(spec, q);
}

int permutational_closed_bound(const std::vector<int>& e) {
    if (!std::is_sorted(e.begin(), e.end())) throw BadParameters("exponents must be nondecreasing");
    const std::size_t r = e.size();
    int total = 0;
    for (std::size_t i = 0; i < r / 2; ++i) total += e[r - 1 - i] - e[i];
    return total;
}

FCrystal make_supersingular_like(const Context& ctx, int d, int e) {
    if (d < 1 || e < 1) throw BadParameters("supersingular family needs d >= 1 and e >= 1");
    std::vector<int> exps(static_cast<std::size_t>(2 * d), 0);
    std::fill(exps.begin() + d, exps.end(), e);
    return make_cyclic(ctx, exps);
}

FCrystal make_k3_isoclinic(const Context& ctx, int r) {
    if (r < 3) throw RankTooSmall("K3-type crystals need rank >= 3, got " + std::to_string(r));
    std::vector<int> exps(static_cast<std::size_t>(r), 1);
    exps.front() = 0;
    exps.back() = 2;
    return make_cyclic(ctx, exps);
}

FCrystal make_k3_nonisoclinic(const Context& ctx, int r1, int mid, int r2) {
    if (r1 < 1 || r2 < 1 || mid < 0)
        throw BadParameters("K3 non-isoclinic family needs r1 >= 1, r2 >= 1, mid >= 0");
    std::vector<WMatrix> blocks;
    std::vector<int> sizes;

    const int n1 = r1 + 1;
    std::vector<int> exps1(static_cast<std::size_t>(n1), 1);
    exps1.back() = 0;
    blocks.push_back(monomial_matrix(ctx, full_cycle(n1), exps1));
    sizes.push_back(n1);

    if (mid > 0) {
        blocks.push_back(WMatrix::diagonal_p_powers(ctx, std::vector<int>(static_cast<std::size_t>(mid), 1)));
        sizes.push_back(mid);
    }

    const int n3 = r2 + 1;
    std::vector<int> exps3(static_cast<std::size_t>(n3), 1);
    exps3.back() = 2;
    blocks.push_back(monomial_matrix(ctx, full_cycle(n3), exps3));
    sizes.push_back(n3);

    return FCrystal::create(block_diagonal(blocks), sizes);
}

WittApprox seeded_unit(const Context& ctx, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<mpz_class> coeffs;
    for (int i = 0; i < ctx->degree(); ++i) {
        const std::uint64_t draw = rng();
        mpz_class c;
        mpz_import(c.get_mpz_t(), 1, 1, sizeof(draw), 0, 0, &draw);
        coeffs.push_back(std::move(c));
    }
    WittApprox u(ctx, std::move(coeffs));
    if (u.valuation() == Valuation::exact(0)) return u;
    return u + WittApprox::one(ctx);
}

FCrystal make_rank2(const Context& ctx, int l1, int l2, std::uint64_t seed) {
    if (l1 == 0)
        throw BadParameters("l1 = 0 is the split case; build it as direct_sum of two rank-1 crystals");
    if (l1 < 0 || l1 >= l2) throw BadParameters("rank-2 family needs 0 < l1 < l2");
    WMatrix a(ctx, 2, 2);
    a(0, 0) = WittApprox::p_power(ctx, l1);
    a(0, 1) = seeded_unit(ctx, seed);
    a(1, 1) = WittApprox::p_power(ctx, l2);
    return FCrystal::create(std::move(a));
}

}  // namespace fcrystal
