#pragma once

// Brute-force reference computations written against plain GMP integers only.

#include <gmpxx.h>

#include <vector>

namespace fcrystal::oracles {

using IntMatrix = std::vector<std::vector<mpz_class>>;

// Exact determinant (fraction-free Bareiss elimination).
mpz_class determinant(IntMatrix a);

// v_p(d_k) - v_p(d_{k-1}), d_k = gcd of all k x k minors. Empty when det = 0.
std::vector<int> determinantal_divisor_valuations(const IntMatrix& a, long p);

// Plain integer matrix product.
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);

// Coefficients (constant term first) of det(tI - A) by cofactor expansion of
// the polynomial matrix; meant for r <= 5.
std::vector<mpz_class> characteristic_polynomial(const IntMatrix& a);

}  // namespace fcrystal::oracles
