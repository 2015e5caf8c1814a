#pragma once

// Constructors and combinatorial oracles for explicit crystal families.

#include "fcrystal/fcrystal.hpp"

#include <cstdint>
#include <vector>

namespace fcrystal {

// phi(v_i) = p^{e_i} v_{pi(i)}; pi is 0-based here.
struct PermSpec {
    std::vector<int> pi;
    std::vector<int> e;
};

// Throws BadParameters unless pi is a bijection and e is sorted, nonnegative,
// and of matching length.
void validate(const PermSpec& spec);

// Cycles of pi, each listed from its smallest element along the cycle.
std::vector<std::vector<int>> permutation_cycles(const std::vector<int>& pi);
bool is_single_cycle(const std::vector<int>& pi);

// The cycle i -> i+1 (mod r).
std::vector<int> full_cycle(int r);

// Entry p^{e_i} at (pi(i), i).
FCrystal make_permutational(const Context& ctx, const PermSpec& spec);
FCrystal make_cyclic(const Context& ctx, const std::vector<int>& e);

// min / max of the window sums e_l + e_{pi(l)} + ... + e_{pi^{q-1}(l)}.
AlphaBetaDelta permutational_window_oracle(const PermSpec& spec, int q);
// Same, but refuses permutations that are not a single r-cycle (NotACycle).
AlphaBetaDelta cyclic_window_oracle(const PermSpec& spec, int q);

// sum_{i=1}^{floor(r/2)} (e_{r-i+1} - e_i)
int permutational_closed_bound(const std::vector<int>& e);

// Full cycle of rank 2d with e-vector (0^d, e^d).
FCrystal make_supersingular_like(const Context& ctx, int d, int e);
// Full cycle with e-vector (0, 1, ..., 1, 2); r >= 3.
FCrystal make_k3_isoclinic(const Context& ctx, int r);
// Block sum x_i -> p x_{i+1}, x_{r1+1} -> x_1 | p * I_mid | z_i -> p z_{i+1},
// z_{r2+1} -> p^2 z_1, with the blocks declared as summands (middle omitted
// when mid = 0).
FCrystal make_k3_nonisoclinic(const Context& ctx, int r1, int mid, int r2);
// [[p^l1, u], [0, p^l2]] with 0 < l1 < l2 and u = seeded_unit(ctx, seed).
FCrystal make_rank2(const Context& ctx, int l1, int l2, std::uint64_t seed);

// Deterministic valuation-0 element: each coefficient is one draw of
// mt19937_64(seed) reduced mod p^N; 1 is added to the constant term if the
// result is not a unit.
WittApprox seeded_unit(const Context& ctx, std::uint64_t seed);

// Monomial matrix from (pi, exponents) without requiring sorted exponents.
WMatrix monomial_matrix(const Context& ctx, const std::vector<int>& pi, const std::vector<int>& exponents);

}  // namespace fcrystal
