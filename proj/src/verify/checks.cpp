#include "fcrystal/verify.hpp"

#include "fcrystal/errors.hpp"
#include "fcrystal/families.hpp"
#include "fcrystal/level_torsion.hpp"
#include "fcrystal/oracles.hpp"
#include "fcrystal/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>

namespace fcrystal::verify {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Context context(long p, int m, int n) {
    static std::mutex mu;
    static std::map<std::tuple<long, int, int>, Context> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{p, m, n}];
    if (!slot) slot = PrimeContext::create(p, m, n);
    return slot;
}

// Automatic precision for a crystal with these Hodge slopes.
Context auto_context(long p, int m, const std::vector<int>& hodge, int extra_q = 0) {
    const int r = static_cast<int>(hodge.size());
    const int emax = *std::max_element(hodge.begin(), hodge.end());
    const int sum = std::accumulate(hodge.begin(), hodge.end(), 0);
    const int q = std::max(default_horizon(r, emax), extra_q);
    return context(p, m, required_precision(emax, sum, m, q));
}

std::vector<int> k3_hodge(int r) {
    std::vector<int> h(static_cast<std::size_t>(r), 1);
    h.front() = 0;
    h.back() = 2;
    return h;
}

// Collects failures; keeps the first few messages.
class Tally {
public:
    void check(bool ok, const std::string& what) {
        ++total_;
        if (ok) return;
        ++failed_;
        if (failed_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
    }
    bool ok() const { return failed_ == 0; }
    std::string summary(const std::string& unit) const {
        std::ostringstream os;
        os << (total_ - failed_) << "/" << total_ << " " << unit;
        if (failed_) os << "; first failures: " << messages_;
        return os.str();
    }

private:
    int total_ = 0;
    int failed_ = 0;
    std::string messages_;
};

bool certified(const LevelTorsionResult& r, int value) { return r.exact && r.lower == value; }

std::string ell_string(const LevelTorsionResult& r) {
    if (r.exact) return std::to_string(r.lower) + " " + r.certificate.to_string();
    return "[" + std::to_string(r.lower) + "," + std::to_string(r.upper) + "] " + r.certificate.to_string();
}

std::string vec_string(const std::vector<int>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

// ---- seeded sweeps ------------------------------------------------------

struct CyclicCase {
    long p = 2;
    PermSpec spec;
};

std::vector<int> sattolo_cycle(int r, std::mt19937_64& rng) {
    std::vector<int> pi(static_cast<std::size_t>(r));
    std::iota(pi.begin(), pi.end(), 0);
    for (int i = r - 1; i > 0; --i) {
        std::uniform_int_distribution<int> pick(0, i - 1);
        std::swap(pi[static_cast<std::size_t>(i)], pi[static_cast<std::size_t>(pick(rng))]);
    }
    return pi;
}

std::vector<int> sorted_exponents(int r, int emax, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, emax);
    std::vector<int> e(static_cast<std::size_t>(r));
    for (auto& x : e) x = pick(rng);
    std::sort(e.begin(), e.end());
    return e;
}

std::vector<CyclicCase> cyclic_cases(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> rank(1, 6);
    std::uniform_int_distribution<int> prime(0, 1);
    std::vector<CyclicCase> out;
    for (int i = 0; i < count; ++i) {
        CyclicCase c;
        c.p = prime(rng) ? 5 : 2;
        const int r = rank(rng);
        c.spec.pi = sattolo_cycle(r, rng);
        c.spec.e = sorted_exponents(r, 5, rng);
        out.push_back(std::move(c));
    }
    return out;
}

struct CyclicOutcome {
    CyclicCase input;
    std::optional<FCrystal> crystal;
    LevelTorsionResult ell;
    std::string error;
};

const std::vector<CyclicOutcome>& cyclic_sweep() {
    static std::once_flag once;
    static std::vector<CyclicOutcome> outcomes;
    std::call_once(once, [] {
        const auto cases = cyclic_cases(0x5eed0001, 200);
        outcomes.resize(cases.size());
        parallel_for(cases.size(), [&](std::size_t i) {
            auto& out = outcomes[i];
            out.input = cases[i];
            try {
                const auto ctx = auto_context(cases[i].p, 1, cases[i].spec.e);
                out.crystal = make_permutational(ctx, cases[i].spec);
                out.ell = level_torsion_isoclinic(*out.crystal, default_horizon(out.crystal->rank(),
                                                                                out.crystal->hodge().back()));
            } catch (const std::exception& e) {
                out.error = e.what();
            }
        });
    });
    return outcomes;
}

std::string case_name(const CyclicCase& c) {
    return "p=" + std::to_string(c.p) + " e=" + vec_string(c.spec.e) + " pi=" + vec_string(c.spec.pi);
}

// ---- criteria -------------------------------------------------------------

CheckResult k3_isoclinic() {
    Tally t;
    for (int r : {3, 4, 5, 8, 21}) {
        for (long p : {2L, 3L, 5L}) {
            const auto m = make_k3_isoclinic(auto_context(p, 1, k3_hodge(r)), r);
            const auto rep = isomorphism_number(m);
            const bool ok = rep.n.kind == NKind::Equal && rep.ell && certified(*rep.ell, 2) &&
                            rep.ell->certificate == Certificate::period(r);
            t.check(ok, "r=" + std::to_string(r) + " p=" + std::to_string(p) + ": " +
                            (rep.ell ? ell_string(*rep.ell) : "no level torsion"));
        }
    }
    return {1, "", t.ok(), t.summary("K3 isoclinic crystals with n = 2 and period r")};
}

CheckResult k3_nonisoclinic() {
    Tally t;
    for (auto [r1, mid, r2] : {std::tuple{1, 0, 1}, std::tuple{1, 1, 1}, std::tuple{2, 0, 1}, std::tuple{2, 2, 3}}) {
        for (long p : {2L, 3L, 5L}) {
            const int r = r1 + mid + r2 + 2;
            const auto m = make_k3_nonisoclinic(auto_context(p, 1, k3_hodge(r)), r1, mid, r2);
            const auto res = level_torsion_sum(m.summands(), default_horizon(r, 2));
            const auto rep = isomorphism_number(m);
            const bool ok = certified(res, 1) && rep.n.kind == NKind::Equal && rep.n.value == 1;
            t.check(ok, "(" + std::to_string(r1) + "," + std::to_string(mid) + "," + std::to_string(r2) +
                            ") p=" + std::to_string(p) + ": " + ell_string(res));
        }
    }
    return {2, "", t.ok(), t.summary("K3 non-isoclinic crystals with n = 1")};
}

CheckResult k3_mixed() {
    Tally t;
    for (int r : {3, 5}) {
        for (auto [r1, mid, r2] : {std::tuple{1, 0, 1}, std::tuple{1, 1, 1}, std::tuple{2, 0, 1}}) {
            for (long p : {2L, 3L}) {
                const int rn = r1 + mid + r2 + 2;
                std::vector<int> hodge = k3_hodge(r);
                const auto more = k3_hodge(rn);
                hodge.insert(hodge.end(), more.begin(), more.end());
                const auto ctx = auto_context(p, 1, hodge);
                const auto sum = direct_sum({make_k3_isoclinic(ctx, r), make_k3_nonisoclinic(ctx, r1, mid, r2)});
                const auto res = level_torsion_sum(sum.summands(), default_horizon(sum.rank(), 2));
                t.check(certified(res, 2), "r=" + std::to_string(r) + " + (" + std::to_string(r1) + "," +
                                               std::to_string(mid) + "," + std::to_string(r2) + "): " +
                                               ell_string(res));
            }
        }
    }
    return {3, "", t.ok(), t.summary("mixed K3 sums with n = 2")};
}

CheckResult rank_two() {
    Tally t;
    for (int e = 1; e <= 5; ++e) {
        for (long p : {2L, 5L}) {
            const auto ctx = auto_context(p, 1, {0, e});
            const auto split = direct_sum({FCrystal::create(WMatrix::identity(ctx, 1)),
                                           FCrystal::create(WMatrix::diagonal_p_powers(ctx, {e}))});
            const auto rs = isomorphism_number(split);
            t.check(rs.n.kind == NKind::Equal && rs.ell && certified(*rs.ell, 1),
                    "split e=" + std::to_string(e) + ": " + (rs.ell ? ell_string(*rs.ell) : "-"));
            const auto cyc = isomorphism_number(make_cyclic(ctx, {0, e}));
            t.check(cyc.n.kind == NKind::Equal && cyc.ell && certified(*cyc.ell, e),
                    "cyclic e=" + std::to_string(e) + ": " + (cyc.ell ? ell_string(*cyc.ell) : "-"));
        }
    }
    for (auto [a, b] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}}) {
        for (long p : {2L, 3L, 5L}) {
            const auto ctx = auto_context(p, 1, {0, a + b});
            const auto m = make_rank2(ctx, a, b, 1000 + static_cast<std::uint64_t>(10 * a + b));
            const auto rep = isomorphism_number(m);
            const bool newton = rep.slope_data.newton == std::vector<Rational>{Rational(a), Rational(b)};
            t.check(newton && rep.n.kind == NKind::UpperBoundOnly && rep.n.value == 2 * a,
                    "[[p^" + std::to_string(a) + ",u],[0,p^" + std::to_string(b) + "]] p=" + std::to_string(p));
        }
    }
    return {4, "", t.ok(), t.summary("rank-2 cases (split, isoclinic, non-isoclinic)")};
}

CheckResult supersingular() {
    const auto start = Clock::now();
    Tally t;
    for (int d = 1; d <= 4; ++d) {
        for (int e = 1; e <= 4; ++e) {
            std::vector<int> hodge(static_cast<std::size_t>(2 * d), 0);
            std::fill(hodge.begin() + d, hodge.end(), e);
            const auto m = make_supersingular_like(auto_context(3, 1, hodge), d, e);
            const auto rep = isomorphism_number(m);
            const int bound = theorem12_bound(rep.slope_data);
            t.check(rep.ell && certified(*rep.ell, d * e) && bound == d * e,
                    "d=" + std::to_string(d) + " e=" + std::to_string(e) + ": " +
                        (rep.ell ? ell_string(*rep.ell) : "-") + " bound " + std::to_string(bound));
        }
    }
    const double secs = seconds_since(start);
    t.check(secs < 10.0, "grid took " + std::to_string(secs) + " s");
    return {5, "", t.ok(), t.summary("supersingular-like crystals with n = de = bound")};
}

CheckResult isoclinic_bound() {
    Tally t;
    for (const auto& o : cyclic_sweep()) {
        if (!o.error.empty()) {
            t.check(false, case_name(o.input) + ": " + o.error);
            continue;
        }
        const int bound = theorem12_bound(o.crystal->slope_data());
        t.check(o.ell.exact && o.ell.upper <= bound,
                case_name(o.input) + ": " + ell_string(o.ell) + " vs bound " + std::to_string(bound));
    }
    const int example_bound = theorem12_bound(ValList{0, 1, 5}, Rational(2));
    const auto ex = level_torsion_isoclinic(make_cyclic(auto_context(2, 1, {0, 1, 5}), {0, 1, 5}), 72);
    t.check(example_bound == 7, "bound for (0,1,5), lambda 2 is " + std::to_string(example_bound));
    t.check(certified(ex, 5) && ex.lower < example_bound, "cyclic (0,1,5): " + ell_string(ex));
    return {6, "", t.ok(), t.summary("sweep crystals and examples within the isoclinic bound")};
}

CheckResult quasi_special() {
    Tally t;
    for (const auto& o : cyclic_sweep()) {
        if (!o.error.empty()) {
            t.check(false, case_name(o.input) + ": " + o.error);
            continue;
        }
        const int bound = quasi_special_bound(o.crystal->hodge());
        t.check(o.ell.exact && o.ell.certificate.kind == CertificateKind::Period && o.ell.upper <= bound,
                case_name(o.input) + ": " + ell_string(o.ell) + " vs " + std::to_string(bound));
    }
    for (int r = 2; r <= 5; ++r) {
        for (int top = 1; top <= 4; ++top) {
            std::vector<int> e(static_cast<std::size_t>(r), 0);
            e.back() = top;
            const auto rep = isomorphism_number(make_cyclic(auto_context(5, 1, e), e));
            t.check(rep.n.kind == NKind::Equal && rep.n.value == top && quasi_special_bound(e) == top,
                    "s = e_r case " + vec_string(e));
        }
    }
    return {7, "", t.ok(), t.summary("quasi-special bound checks")};
}

std::vector<std::vector<int>> sorted_vectors(int r, int emax) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int lo) {
        if (static_cast<int>(cur.size()) == r) {
            out.push_back(cur);
            return;
        }
        for (int v = lo; v <= emax; ++v) {
            cur.push_back(v);
            rec(v);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

CheckResult permutational() {
    const auto start = Clock::now();
    struct Job {
        PermSpec spec;
    };
    std::vector<Job> jobs;
    for (int r = 1; r <= 5; ++r) {
        const auto exps = sorted_vectors(r, 3);
        std::vector<int> pi(static_cast<std::size_t>(r));
        std::iota(pi.begin(), pi.end(), 0);
        do {
            for (const auto& e : exps) jobs.push_back({PermSpec{pi, e}});
        } while (std::next_permutation(pi.begin(), pi.end()));
    }
    std::vector<std::string> failures(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        const auto& spec = jobs[i].spec;
        const int r = static_cast<int>(spec.pi.size());
        try {
            const auto rep = isomorphism_number(make_permutational(auto_context(2, 1, spec.e), spec));
            const int bound = permutational_closed_bound(spec.e);
            const bool exact = rep.n.kind == NKind::Equal && rep.n.value.has_value();
            const bool full = spec.pi == full_cycle(r);
            if (!exact) failures[i] = "not certified";
            else if (*rep.n.value > bound) failures[i] = "n=" + std::to_string(*rep.n.value) + " > " + std::to_string(bound);
            else if (full && *rep.n.value != bound)
                failures[i] = "full cycle n=" + std::to_string(*rep.n.value) + " != " + std::to_string(bound);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
        if (!failures[i].empty()) failures[i] = "pi=" + vec_string(spec.pi) + " e=" + vec_string(spec.e) + ": " + failures[i];
    });
    Tally t;
    for (const auto& f : failures) t.check(f.empty(), f);
    const double secs = seconds_since(start);
    t.check(secs < 60.0, "sweep took " + std::to_string(secs) + " s");
    return {8, "", t.ok(), t.summary("permutational crystals (r <= 5, e in {0..3})")};
}

WittApprox random_element(const Context& ctx, std::mt19937_64& rng) {
    std::vector<mpz_class> c;
    for (int i = 0; i < ctx->degree(); ++i) {
        const std::uint64_t draw = rng();
        mpz_class z;
        mpz_import(z.get_mpz_t(), 1, 1, sizeof(draw), 0, 0, &draw);
        c.push_back(std::move(z));
    }
    return WittApprox(ctx, std::move(c));
}

// Random invertible matrix: lower unitriangular * upper with unit diagonal.
WMatrix random_unimodular(const Context& ctx, int r, std::mt19937_64& rng) {
    WMatrix lower = WMatrix::identity(ctx, r);
    WMatrix upper(ctx, r, r);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < i; ++j) lower(i, j) = random_element(ctx, rng);
        upper(i, i) = seeded_unit(ctx, rng());
        for (int j = i + 1; j < r; ++j) upper(i, j) = random_element(ctx, rng);
    }
    return lower * upper;
}

CheckResult duality() {
    Tally t;
    std::mt19937_64 rng(0x5eed0009);
    std::uniform_int_distribution<int> rank(2, 4);
    std::uniform_int_distribution<int> degree(1, 2);
    std::uniform_int_distribution<int> prime(0, 2);
    const long primes[] = {2, 3, 5};
    for (int n = 0; n < 100; ++n) {
        const long p = primes[prime(rng)];
        const int m = degree(rng);
        const int r = rank(rng);
        std::vector<int> e = sorted_exponents(r, 4, rng);
        e.front() = 0;
        std::sort(e.begin(), e.end());
        const int top = e.back();
        const auto ctx = context(p, m, 9 * top + 4);
        const WMatrix a = random_unimodular(ctx, r, rng) * WMatrix::diagonal_p_powers(ctx, e) *
                          random_unimodular(ctx, r, rng);
        const std::string name = "p=" + std::to_string(p) + " m=" + std::to_string(m) + " e=" + vec_string(e);
        try {
            const auto mc = FCrystal::create(a);
            const auto dual = mc.dual_twisted();
            t.check(mc.hodge() == e, name + ": Hodge slopes " + vec_string(mc.hodge()));
            std::vector<int> reflected;
            for (auto it = e.rbegin(); it != e.rend(); ++it) reflected.push_back(top - *it);
            t.check(dual.hodge() == reflected, name + ": dual Hodge slopes " + vec_string(dual.hodge()));
            for (int q = 1; q <= 8; ++q) {
                const auto x = mc.alpha_beta_delta(q);
                const auto y = dual.alpha_beta_delta(q);
                t.check(x.alpha + y.beta == q * top && y.alpha + x.beta == q * top,
                        name + " q=" + std::to_string(q) + ": alpha/beta sums differ from q e");
            }
            std::map<int, int> h, hd;
            for (int v : e) ++h[v];
            for (int v : dual.hodge()) ++hd[v];
            for (const Rational lam : {Rational(1, 2), Rational(1), Rational(3, 2)}) {
                if (!(lam < Rational(top))) continue;
                int lhs = 0, rhs = 0;
                for (const auto& [i, c] : hd)
                    if (Rational(i) < Rational(top) - lam) lhs += c;
                for (const auto& [i, c] : h)
                    if (Rational(i) > lam) rhs += c;
                t.check(lhs == rhs, name + ": Hodge-number reflection fails at lambda " + to_string(lam));
            }
        } catch (const std::exception& ex) {
            t.check(false, name + ": " + ex.what());
        }
    }
    return {9, "", t.ok(), t.summary("duality identities")};
}

void check_slope_estimates(const FCrystal& m, const std::string& name, Tally& t) {
    const auto& sd = m.slope_data();
    if (!sd.isoclinic) {
        t.check(false, name + ": expected isoclinic");
        return;
    }
    const Rational lam = *sd.lambda;
    int below = 0;
    for (int e : sd.hodge)
        if (Rational(e) < lam) ++below;
    for (int n = 1; n <= 8; ++n) {
        const auto abd = m.alpha_beta_delta(n + below);
        t.check(abd.alpha >= ceil(lam * n), name + ": slope estimate fails at n=" + std::to_string(n));
    }
    for (int q = 1; q <= 2 * m.rank() + 8; ++q) {
        const auto abd = m.alpha_beta_delta(q);
        const Rational ql = lam * q;
        const bool order = Rational(abd.alpha) <= ql && ql <= Rational(abd.beta);
        const bool iff = (Rational(abd.alpha) == ql) == (Rational(abd.beta) == ql);
        t.check(order && iff, name + ": alpha <= q lambda <= beta fails at q=" + std::to_string(q));
    }
}

CheckResult slope_estimates() {
    Tally t;
    for (const auto& o : cyclic_sweep()) {
        const auto& c = o.input;
        const int r = static_cast<int>(c.spec.e.size());
        const auto ctx = auto_context(c.p, 1, c.spec.e, 2 * r + 8);
        check_slope_estimates(make_permutational(ctx, c.spec), case_name(c), t);
    }
    for (int d = 1; d <= 4; ++d) {
        for (int e = 1; e <= 4; ++e) {
            std::vector<int> hodge(static_cast<std::size_t>(2 * d), 0);
            std::fill(hodge.begin() + d, hodge.end(), e);
            check_slope_estimates(make_supersingular_like(auto_context(3, 1, hodge, 4 * d + 8), d, e),
                                  "supersingular " + std::to_string(d) + "," + std::to_string(e), t);
        }
    }
    for (int r : {3, 4, 5, 8}) {
        check_slope_estimates(make_k3_isoclinic(auto_context(2, 1, k3_hodge(r), 2 * r + 8), r),
                              "K3 r=" + std::to_string(r), t);
    }
    return {10, "", t.ok(), t.summary("slope estimate and alpha/beta ordering checks")};
}

CheckResult oracle_equivalence() {
    const auto start = Clock::now();
    Tally t;
    std::mt19937_64 rng(0x5eed0011);
    std::uniform_int_distribution<int> rank(1, 6);
    std::uniform_int_distribution<int> prime(0, 1);
    for (int n = 0; n < 500; ++n) {
        const int r = rank(rng);
        PermSpec spec{sattolo_cycle(r, rng), sorted_exponents(r, 5, rng)};
        std::uniform_int_distribution<int> qdist(1, 2 * r);
        const int q = qdist(rng);
        const long p = prime(rng) ? 5 : 2;
        const auto ctx = auto_context(p, 1, spec.e, 2 * r);
        const auto matrix_path = make_permutational(ctx, spec).alpha_beta_delta(q);
        const auto window = cyclic_window_oracle(spec, q);
        t.check(matrix_path == window, "e=" + vec_string(spec.e) + " pi=" + vec_string(spec.pi) +
                                           " q=" + std::to_string(q));
    }
    std::uniform_int_distribution<int> coeff(-9, 9);
    std::uniform_int_distribution<int> power(0, 5);
    int made = 0;
    while (made < 100) {
        const long p = made % 2 == 0 ? 2 : 7;
        oracles::IntMatrix a(4, std::vector<mpz_class>(4));
        for (auto& row : a)
            for (auto& x : row) {
                const int k = power(rng);
                mpz_class pk;
                mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), k < 3 ? 0 : static_cast<unsigned long>(k - 2));
                x = coeff(rng) * pk;
            }
        const mpz_class det = oracles::determinant(a);
        if (det == 0) continue;
        ++made;
        const auto expected = oracles::determinantal_divisor_valuations(a, p);
        int vdet = 0;
        for (int v : expected) vdet += v;
        const auto ctx = context(p, 1, vdet + 4);
        WMatrix w(ctx, 4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                w(i, j) = WittApprox::from_integer(ctx, a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        const auto got = elementary_divisor_valuations(w);
        t.check(got == expected, "p=" + std::to_string(p) + ": Smith " + vec_string(got) + " vs minors " +
                                     vec_string(expected));
    }
    const double secs = seconds_since(start);
    t.check(secs < 60.0, "oracle checks took " + std::to_string(secs) + " s");
    return {11, "", t.ok(), t.summary("oracle comparisons")};
}

CheckResult direct_sum_bound() {
    Tally t;
    const auto& sweep = cyclic_sweep();
    for (std::size_t k = 0; k + 1 < sweep.size(); k += 2) {
        const auto& a = sweep[k];
        const auto& b = sweep[k + 1];
        if (!a.error.empty() || !b.error.empty()) {
            t.check(false, "sweep entry failed");
            continue;
        }
        std::vector<int> hodge = a.input.spec.e;
        hodge.insert(hodge.end(), b.input.spec.e.begin(), b.input.spec.e.end());
        const auto ctx = auto_context(a.input.p, 1, hodge);
        const auto ma = make_permutational(ctx, a.input.spec);
        const auto mb = make_permutational(ctx, b.input.spec);
        const int emax = *std::max_element(hodge.begin(), hodge.end());
        const auto sum = level_torsion_sum({ma, mb}, default_horizon(static_cast<int>(hodge.size()), emax));
        const int na = a.ell.lower, nb = b.ell.lower;
        const int estimate = direct_sum_estimate({na, nb});
        t.check(sum.exact && sum.lower <= estimate && sum.lower >= std::max(na, nb),
                case_name(a.input) + " + " + case_name(b.input) + ": " + ell_string(sum) + " vs estimate " +
                    std::to_string(estimate));
    }
    return {12, "", t.ok(), t.summary("pairwise sums within max{1, n_i, n_i + n_j - 1}")};
}

CheckResult pdiv_consistency() {
    Tally t;
    for (int c = 1; c <= 12; ++c) {
        for (int d = 1; d <= 12; ++d) {
            ValList hodge(static_cast<std::size_t>(c), 0);
            hodge.insert(hodge.end(), static_cast<std::size_t>(d), 1);
            const int a = pdiv_bound(c, d);
            const int b = theorem12_bound(hodge, Rational(d, c + d));
            t.check(a == b, "c=" + std::to_string(c) + " d=" + std::to_string(d) + ": " + std::to_string(a) +
                                " vs " + std::to_string(b));
        }
    }
    return {13, "", t.ok(), t.summary("(c, d) pairs")};
}

}  // namespace

std::string criterion_label(int id) {
    static const char* labels[] = {
        "K3 isoclinic crystals have n = 2",
        "K3 non-isoclinic crystals have n = 1",
        "mixed K3 sums have n = 2",
        "rank-2 crystals: split, isoclinic, non-isoclinic",
        "supersingular-like crystals attain n = de",
        "isoclinic closed-form bound dominates the level torsion",
        "quasi-special bound min{s, r e_r - s}",
        "permutational bound, equality for the full cycle",
        "duality identities for alpha, beta and Hodge numbers",
        "slope estimate and alpha <= q lambda <= beta",
        "window-sum and determinantal-divisor oracles",
        "direct-sum estimate max{1, n_i, n_i + n_j - 1}",
        "p-divisible bound agrees with the isoclinic bound",
    };
    if (id < 1 || id > kCriterionCount) throw BadParameters("no criterion " + std::to_string(id));
    return labels[id - 1];
}

std::vector<int> subset_criteria(const std::string& subset) {
    if (subset == "all") {
        std::vector<int> all(kCriterionCount);
        std::iota(all.begin(), all.end(), 1);
        return all;
    }
    if (subset == "k3") return {1, 2, 3};
    if (subset == "rank2") return {4};
    if (subset == "quasi-special") return {5, 7, 8};
    if (subset == "bounds") return {6, 9, 10, 11, 12, 13};
    throw BadParameters("unknown subset '" + subset + "' (all, k3, rank2, quasi-special, bounds)");
}

CheckResult run_criterion(int id) {
    const auto start = Clock::now();
    CheckResult out;
    try {
        switch (id) {
            case 1: out = k3_isoclinic(); break;
            case 2: out = k3_nonisoclinic(); break;
            case 3: out = k3_mixed(); break;
            case 4: out = rank_two(); break;
            case 5: out = supersingular(); break;
            case 6: out = isoclinic_bound(); break;
            case 7: out = quasi_special(); break;
            case 8: out = permutational(); break;
            case 9: out = duality(); break;
            case 10: out = slope_estimates(); break;
            case 11: out = oracle_equivalence(); break;
            case 12: out = direct_sum_bound(); break;
            case 13: out = pdiv_consistency(); break;
            default: throw BadParameters("no criterion " + std::to_string(id));
        }
    } catch (const BadParameters&) {
        throw;
    } catch (const std::exception& e) {
        out.passed = false;
        out.detail = std::string("exception: ") + e.what();
    }
    out.id = id;
    out.label = criterion_label(id);
    out.seconds = seconds_since(start);
    if (id == 1 || id == 2) {
        if (out.seconds >= 5.0) {
            out.passed = false;
            out.detail += "; took " + std::to_string(out.seconds) + " s (limit 5 s)";
        }
    }
    return out;
}

std::vector<CheckResult> run_criteria(const std::vector<int>& ids) {
    std::vector<CheckResult> out;
    for (int id : ids) out.push_back(run_criterion(id));
    return out;
}

}  // namespace fcrystal::verify
