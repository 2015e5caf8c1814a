#pragma once

// Truncated Witt vectors W(F_{p^m}) / p^N, modelled as (Z/p^N)[x] / (f) with f a
// monic lift of an irreducible polynomial over F_p, together with the lifted
// Frobenius x -> sigma(x).

#include <gmpxx.h>

#include <memory>
#include <string>
#include <vector>

namespace fcrystal {

class PrimeContext;
using Context = std::shared_ptr<const PrimeContext>;

// p-adic valuation of a truncated element: exactly v, or "at least N" (zero at
// this precision).
class Valuation {
public:
    static Valuation exact(int v) { return Valuation(true, v); }
    static Valuation at_least(int n) { return Valuation(false, n); }

    bool is_exact() const { return exact_; }
    // v for Exact(v), N for AtLeast(N).
    int value() const { return value_; }

    bool operator==(const Valuation&) const = default;
    std::string to_string() const;

private:
    Valuation(bool exact, int value) : exact_(exact), value_(value) {}
    bool exact_;
    int value_;
};

class PrimeContext {
public:
    // Deterministic context: the modulus is the lexicographically first monic
    // irreducible polynomial of degree m over F_p (coefficients compared from
    // x^{m-1} down to x^0, each in [0, p)), read with those integer coefficients
    // at every precision. sigma(x) is its Hensel-lifted root congruent to x^p.
    static Context create(long p, int m, int precision);

    long p() const { return p_; }
    int degree() const { return m_; }
    int precision() const { return n_; }
    const mpz_class& prime() const { return prime_; }
    const mpz_class& modulus_pn() const { return pn_; }
    // p^k for 0 <= k <= N.
    const mpz_class& p_power(int k) const { return p_powers_.at(static_cast<std::size_t>(k)); }

    // Coefficients f_0..f_m, f_m = 1.
    const std::vector<mpz_class>& modulus() const { return modulus_; }
    // Coefficients of sigma(x), length m.
    const std::vector<mpz_class>& frobenius_image() const { return frob_; }

    // Coefficients of sigma^k(x)^i for 0 <= k < m, 0 <= i < m.
    const std::vector<mpz_class>& sigma_power(int k, int i) const {
        return sigma_tables_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
    }

    // Same (p, m, N) means interchangeable elements.
    bool same_as(const PrimeContext& other) const {
        return p_ == other.p_ && m_ == other.m_ && n_ == other.n_;
    }

    std::string modulus_string() const;

    // Internal polynomial kernel shared by the element type; operates on
    // canonical coefficient vectors of length m.
    std::vector<mpz_class> mul(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) const;
    void reduce(std::vector<mpz_class>& a) const;

private:
    PrimeContext() = default;

    long p_ = 0;
    int m_ = 0;
    int n_ = 0;
    mpz_class prime_;
    mpz_class pn_;
    std::vector<mpz_class> p_powers_;
    std::vector<mpz_class> modulus_;
    std::vector<mpz_class> frob_;
    // sigma_tables_[k][i] = coefficients of sigma^k(x)^i
    std::vector<std::vector<std::vector<mpz_class>>> sigma_tables_;
};

bool is_prime(long n);

// Element of W(F_{p^m}) truncated at p^N. Canonical form: every coefficient in [0, p^N).
class WittApprox {
public:
    WittApprox() = default;
    WittApprox(Context ctx, std::vector<mpz_class> coeffs);

    static WittApprox zero(const Context& ctx);
    static WittApprox one(const Context& ctx);
    static WittApprox from_integer(const Context& ctx, const mpz_class& n);
    // The generator x of the residue field extension.
    static WittApprox generator(const Context& ctx);
    static WittApprox p_power(const Context& ctx, int k);

    const Context& context() const { return ctx_; }
    const std::vector<mpz_class>& coeffs() const { return c_; }

    bool is_zero() const;
    Valuation valuation() const;

    WittApprox operator-() const;
    friend WittApprox operator+(const WittApprox& a, const WittApprox& b);
    friend WittApprox operator-(const WittApprox& a, const WittApprox& b);
    friend WittApprox operator*(const WittApprox& a, const WittApprox& b);
    WittApprox& operator+=(const WittApprox& b);
    WittApprox& operator-=(const WittApprox& b);
    bool operator==(const WittApprox& b) const;

    WittApprox times_p_power(int k) const;
    // Exact division by p^k; the element must have valuation >= k. The quotient
    // is only meaningful modulo p^{N-k}; its canonical lift is returned.
    WittApprox divided_by_p_power(int k) const;
    // Inverse of a valuation-0 element; throws BadParameters for non-units.
    WittApprox unit_inverse() const;
    // sigma^k applied coefficientwise-through-substitution; k reduced mod m.
    WittApprox frobenius_power(int k) const;
    // Canonical representative read in another context with the same (p, m)
    // and precision <= N.
    WittApprox reduced_to(const Context& smaller) const;

    std::string to_string() const;

private:
    Context ctx_;
    std::vector<mpz_class> c_;
};

enum class RingOp { Add, Sub, Mul };
WittApprox ring_arith(const WittApprox& a, const WittApprox& b, RingOp op);

void require_same_context(const Context& a, const Context& b);

// p-adic valuation of an integer, capped at `cap` for zero.
int padic_valuation(const mpz_class& n, const mpz_class& p, int cap);

}  // namespace fcrystal
