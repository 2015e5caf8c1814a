#include "fcrystal/witt.hpp"

#include "fcrystal/errors.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace fcrystal {

namespace {

// Dense polynomials over F_p, lowest degree first, no trailing zeros.
using FpPoly = std::vector<long>;

long mod_p(long a, long p) {
    a %= p;
    return a < 0 ? a + p : a;
}

void trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

long inv_mod_p(long a, long p) {
    long t = 0, new_t = 1, r = p, new_r = mod_p(a, p);
    while (new_r != 0) {
        long q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    return mod_p(t, p);
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, long p) {
    if (a.empty() || b.empty()) return {};
    FpPoly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = (out[i + j] + a[i] * b[j]) % p;
    trim(out);
    return out;
}

// Remainder and quotient of a by b (b nonzero).
std::pair<FpPoly, FpPoly> fp_divmod(FpPoly a, const FpPoly& b, long p) {
    FpPoly q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, 0);
    long lead_inv = inv_mod_p(b.back(), p);
    while (!a.empty() && a.size() >= b.size()) {
        std::size_t shift = a.size() - b.size();
        long c = a.back() * lead_inv % p;
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] = mod_p(a[shift + i] - c * b[i], p);
        trim(a);
    }
    trim(q);
    return {q, a};
}

FpPoly fp_sub(FpPoly a, const FpPoly& b, long p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = mod_p(a[i] - b[i], p);
    trim(a);
    return a;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, long p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = fp_divmod(a, b, p).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// x^(p^k) mod f over F_p.
FpPoly fp_frobenius_power_of_x(int k, const FpPoly& f, long p) {
    FpPoly acc = fp_divmod(FpPoly{0, 1}, f, p).second;
    for (int step = 0; step < k; ++step) {
        // acc <- acc^p mod f by square-and-multiply
        FpPoly result{1};
        FpPoly base = acc;
        long e = p;
        while (e > 0) {
            if (e & 1) result = fp_divmod(fp_mul(result, base, p), f, p).second;
            base = fp_divmod(fp_mul(base, base, p), f, p).second;
            e >>= 1;
        }
        acc = result;
    }
    return acc;
}

// Ben-Or: f of degree m is irreducible iff gcd(f, x^{p^i} - x) = 1 for 1 <= i <= m/2.
bool fp_irreducible(const FpPoly& f, long p) {
    int m = static_cast<int>(f.size()) - 1;
    for (int i = 1; i <= m / 2; ++i) {
        FpPoly h = fp_sub(fp_frobenius_power_of_x(i, f, p), FpPoly{0, 1}, p);
        if (fp_gcd(f, h, p).size() != 1) return false;
    }
    return true;
}

FpPoly first_irreducible(long p, int m) {
    // Enumerate (c_{m-1}, ..., c_0) lexicographically.
    std::vector<long> digits(static_cast<std::size_t>(m), 0);
    while (true) {
        FpPoly f(static_cast<std::size_t>(m) + 1, 0);
        for (int i = 0; i < m; ++i) f[static_cast<std::size_t>(i)] = digits[static_cast<std::size_t>(i)];
        f[static_cast<std::size_t>(m)] = 1;
        if (fp_irreducible(f, p)) return f;
        // increment with c_0 as the least significant digit
        int i = 0;
        while (i < m && ++digits[static_cast<std::size_t>(i)] == p) digits[static_cast<std::size_t>(i++)] = 0;
        if (i == m) throw HenselFailure("no irreducible polynomial found");
    }
}

// Extended Euclid in F_p[x]: inverse of a modulo f.
FpPoly fp_inverse_mod(const FpPoly& a, const FpPoly& f, long p) {
    FpPoly r0 = f, r1 = a, s0{}, s1{1};
    trim(r1);
    while (!r1.empty() && r1.size() > 1) {
        auto [q, r] = fp_divmod(r0, r1, p);
        FpPoly s2 = fp_sub(s0, fp_mul(q, s1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r1.empty()) throw BadParameters("element is not a unit");
    long c = inv_mod_p(r1[0], p);
    for (auto& x : s1) x = x * c % p;
    return fp_divmod(s1, f, p).second;
}

std::vector<mpz_class> raw_add(const PrimeContext& ctx, std::vector<mpz_class> a, const std::vector<mpz_class>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    ctx.reduce(a);
    return a;
}

std::vector<mpz_class> raw_sub(const PrimeContext& ctx, std::vector<mpz_class> a, const std::vector<mpz_class>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    ctx.reduce(a);
    return a;
}

std::vector<mpz_class> raw_constant(const PrimeContext& ctx, long c) {
    std::vector<mpz_class> v(static_cast<std::size_t>(ctx.degree()), 0);
    v[0] = c;
    ctx.reduce(v);
    return v;
}

bool raw_is_zero(const std::vector<mpz_class>& a) {
    return std::all_of(a.begin(), a.end(), [](const mpz_class& c) { return c == 0; });
}

std::vector<mpz_class> raw_unit_inverse(const PrimeContext& ctx, const std::vector<mpz_class>& a) {
    if (ctx.degree() == 1) {
        mpz_class inv;
        if (mpz_invert(inv.get_mpz_t(), a[0].get_mpz_t(), ctx.modulus_pn().get_mpz_t()) == 0)
            throw BadParameters("element is not a unit");
        return {inv};
    }
    const long p = ctx.p();
    FpPoly abar, fbar;
    for (const auto& c : a) abar.push_back(mpz_class(c % p).get_si());
    for (const auto& c : ctx.modulus()) fbar.push_back(mpz_class(c % p).get_si());
    trim(abar);
    FpPoly inv0 = fp_inverse_mod(abar, fbar, p);
    std::vector<mpz_class> y(static_cast<std::size_t>(ctx.degree()), 0);
    for (std::size_t i = 0; i < inv0.size(); ++i) y[i] = inv0[i];
    const auto one = raw_constant(ctx, 1);
    const auto two = raw_constant(ctx, 2);
    // Newton: y <- y (2 - a y) doubles the number of correct digits.
    for (int correct = 1; correct < ctx.precision(); correct *= 2)
        y = ctx.mul(y, raw_sub(ctx, two, ctx.mul(a, y)));
    if (ctx.mul(a, y) != one) throw HenselFailure("unit inverse did not converge");
    return y;
}

// sum_i a_i * table[i]
std::vector<mpz_class> raw_substitute(const PrimeContext& ctx, const std::vector<mpz_class>& a,
                                      const std::vector<std::vector<mpz_class>>& powers) {
    std::vector<mpz_class> out(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += a[i] * powers[i][j];
    }
    ctx.reduce(out);
    return out;
}

std::vector<std::vector<mpz_class>> raw_powers(const PrimeContext& ctx, const std::vector<mpz_class>& y) {
    std::vector<std::vector<mpz_class>> out;
    out.push_back(raw_constant(ctx, 1));
    for (int i = 1; i < ctx.degree(); ++i) out.push_back(ctx.mul(out.back(), y));
    return out;
}

}  // namespace

std::string Valuation::to_string() const {
    return (exact_ ? "Exact(" : "AtLeast(") + std::to_string(value_) + ")";
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

int padic_valuation(const mpz_class& n, const mpz_class& p, int cap) {
    if (n == 0) return cap;
    mpz_class rest;
    auto v = static_cast<int>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
    return std::min(v, cap);
}

void PrimeContext::reduce(std::vector<mpz_class>& a) const {
    for (auto& c : a) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), pn_.get_mpz_t());
}

std::vector<mpz_class> PrimeContext::mul(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) const {
    if (m_ == 1) {
        std::vector<mpz_class> out{a[0] * b[0]};
        reduce(out);
        return out;
    }
    const auto m = static_cast<std::size_t>(m_);
    std::vector<mpz_class> prod(2 * m - 1, 0);
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < m; ++j) prod[i + j] += a[i] * b[j];
    }
    for (std::size_t k = 2 * m - 2; k >= m; --k) {
        if (prod[k] == 0) continue;
        mpz_class c = prod[k];
        for (std::size_t i = 0; i < m; ++i) prod[k - m + i] -= c * modulus_[i];
        prod[k] = 0;
    }
    prod.resize(m);
    reduce(prod);
    return prod;
}

Context PrimeContext::create(long p, int m, int precision) {
    if (!is_prime(p)) throw NotPrime(std::to_string(p) + " is not prime");
    if (p >= (1L << 31)) throw BadParameters("prime too large for the residue-field kernel");
    if (m < 1) throw BadParameters("residue degree must be >= 1");
    if (precision < 1) throw BadParameters("precision must be >= 1");

    std::shared_ptr<PrimeContext> ctx(new PrimeContext());
    ctx->p_ = p;
    ctx->m_ = m;
    ctx->n_ = precision;
    ctx->prime_ = p;
    ctx->p_powers_.reserve(static_cast<std::size_t>(precision) + 1);
    mpz_class pk = 1;
    for (int k = 0; k <= precision; ++k) {
        ctx->p_powers_.push_back(pk);
        pk *= p;
    }
    ctx->pn_ = ctx->p_powers_.back();

    for (long c : first_irreducible(p, m)) ctx->modulus_.emplace_back(c);

    const PrimeContext& C = *ctx;
    if (m == 1) {
        ctx->frob_ = {0};
        ctx->sigma_tables_ = {{raw_constant(C, 1)}};
        return ctx;
    }

    // Hensel/Newton lift of the root of f congruent to x^p.
    std::vector<mpz_class> x(static_cast<std::size_t>(m), 0);
    x[1] = 1;
    std::vector<mpz_class> y = raw_constant(C, 1);
    for (long i = 0; i < p; ++i) y = C.mul(y, x);
    auto eval = [&](const std::vector<mpz_class>& at, bool derivative) {
        std::vector<mpz_class> acc(static_cast<std::size_t>(m), 0);
        int top = derivative ? m - 1 : m;
        for (int k = top; k >= 0; --k) {
            acc = C.mul(acc, at);
            mpz_class coeff = derivative ? C.modulus_[static_cast<std::size_t>(k) + 1] * (k + 1)
                                         : C.modulus_[static_cast<std::size_t>(k)];
            acc[0] += coeff;
            C.reduce(acc);
        }
        return acc;
    };
    int iterations = 0;
    while (!raw_is_zero(eval(y, false))) {
        if (++iterations > 64) throw HenselFailure("Frobenius lift did not converge");
        y = raw_sub(C, y, C.mul(eval(y, false), raw_unit_inverse(C, eval(y, true))));
    }
    ctx->frob_ = y;

    // sigma^k(x) for k = 0..m-1, then their power tables.
    std::vector<std::vector<mpz_class>> images{x};
    auto sigma_table = raw_powers(C, y);
    for (int k = 1; k < m; ++k) images.push_back(raw_substitute(C, images.back(), sigma_table));
    for (int k = 0; k < m; ++k) ctx->sigma_tables_.push_back(raw_powers(C, images[static_cast<std::size_t>(k)]));
    return ctx;
}

std::string PrimeContext::modulus_string() const {
    std::ostringstream os;
    bool first = true;
    for (int k = m_; k >= 0; --k) {
        const mpz_class& c = modulus_[static_cast<std::size_t>(k)];
        if (c == 0 && k != 0) continue;
        if (c == 0 && !first) continue;
        if (!first) os << " + ";
        first = false;
        if (k == 0) os << c.get_str();
        else {
            if (c != 1) os << c.get_str() << "*";
            os << "x";
            if (k > 1) os << "^" << k;
        }
    }
    return os.str();
}

void require_same_context(const Context& a, const Context& b) {
    if (a == b) return;
    if (!a || !b || !a->same_as(*b)) throw ContextMismatch();
}

WittApprox::WittApprox(Context ctx, std::vector<mpz_class> coeffs) : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
    if (c_.size() != static_cast<std::size_t>(ctx_->degree()))
        throw DimensionMismatch("element needs exactly m coefficients");
    ctx_->reduce(c_);
}

WittApprox WittApprox::zero(const Context& ctx) { return from_integer(ctx, 0); }
WittApprox WittApprox::one(const Context& ctx) { return from_integer(ctx, 1); }

WittApprox WittApprox::from_integer(const Context& ctx, const mpz_class& n) {
    std::vector<mpz_class> c(static_cast<std::size_t>(ctx->degree()), 0);
    c[0] = n;
    return WittApprox(ctx, std::move(c));
}

WittApprox WittApprox::generator(const Context& ctx) {
    std::vector<mpz_class> c(static_cast<std::size_t>(ctx->degree()), 0);
    if (ctx->degree() > 1) c[1] = 1;
    return WittApprox(ctx, std::move(c));
}

WittApprox WittApprox::p_power(const Context& ctx, int k) {
    if (k >= ctx->precision()) return zero(ctx);
    return from_integer(ctx, ctx->p_power(k));
}

bool WittApprox::is_zero() const { return raw_is_zero(c_); }

Valuation WittApprox::valuation() const {
    const int n = ctx_->precision();
    int v = n;
    for (const auto& c : c_) v = std::min(v, padic_valuation(c, ctx_->prime(), n));
    return v < n ? Valuation::exact(v) : Valuation::at_least(n);
}

WittApprox WittApprox::operator-() const { return zero(ctx_) - *this; }

WittApprox operator+(const WittApprox& a, const WittApprox& b) {
    WittApprox r = a;
    r += b;
    return r;
}

WittApprox operator-(const WittApprox& a, const WittApprox& b) {
    WittApprox r = a;
    r -= b;
    return r;
}

WittApprox operator*(const WittApprox& a, const WittApprox& b) {
    require_same_context(a.ctx_, b.ctx_);
    WittApprox r;
    r.ctx_ = a.ctx_;
    r.c_ = a.ctx_->mul(a.c_, b.c_);
    return r;
}

WittApprox& WittApprox::operator+=(const WittApprox& b) {
    require_same_context(ctx_, b.ctx_);
    c_ = raw_add(*ctx_, std::move(c_), b.c_);
    return *this;
}

WittApprox& WittApprox::operator-=(const WittApprox& b) {
    require_same_context(ctx_, b.ctx_);
    c_ = raw_sub(*ctx_, std::move(c_), b.c_);
    return *this;
}

bool WittApprox::operator==(const WittApprox& b) const {
    require_same_context(ctx_, b.ctx_);
    return c_ == b.c_;
}

WittApprox WittApprox::times_p_power(int k) const {
    if (k >= ctx_->precision()) return zero(ctx_);
    WittApprox r = *this;
    for (auto& c : r.c_) c *= ctx_->p_power(k);
    ctx_->reduce(r.c_);
    return r;
}

WittApprox WittApprox::divided_by_p_power(int k) const {
    if (k == 0) return *this;
    WittApprox r = *this;
    const mpz_class& pk = ctx_->p_power(k);
    for (auto& c : r.c_) {
        if (!mpz_divisible_p(c.get_mpz_t(), pk.get_mpz_t()))
            throw NonIntegralRescale("division by p^" + std::to_string(k) + " is not exact");
        mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), pk.get_mpz_t());
    }
    return r;
}

WittApprox WittApprox::unit_inverse() const {
    WittApprox r;
    r.ctx_ = ctx_;
    r.c_ = raw_unit_inverse(*ctx_, c_);
    return r;
}

WittApprox WittApprox::frobenius_power(int k) const {
    const int m = ctx_->degree();
    k %= m;
    if (k < 0) k += m;
    if (k == 0) return *this;
    std::vector<mpz_class> out(c_.size(), 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        const auto& power = ctx_->sigma_power(k, static_cast<int>(i));
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += c_[i] * power[j];
    }
    return WittApprox(ctx_, std::move(out));
}

WittApprox WittApprox::reduced_to(const Context& smaller) const {
    if (smaller->p() != ctx_->p() || smaller->degree() != ctx_->degree() ||
        smaller->precision() > ctx_->precision())
        throw ContextMismatch("cannot reduce into a context of higher precision or different field");
    return WittApprox(smaller, c_);
}

std::string WittApprox::to_string() const {
    if (c_.size() == 1) return c_[0].get_str();
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? ", " : "") << c_[i].get_str();
    os << "]";
    return os.str();
}

WittApprox ring_arith(const WittApprox& a, const WittApprox& b, RingOp op) {
    switch (op) {
        case RingOp::Add: return a + b;
        case RingOp::Sub: return a - b;
        case RingOp::Mul: return a * b;
    }
    return a;
}

}  // namespace fcrystal
