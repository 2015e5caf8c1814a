#include "fcrystal/dvr_linalg.hpp"

#include "fcrystal/errors.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace fcrystal {

namespace {

// Accumulates unreduced polynomial products, folding once at the end.
class ProductAccumulator {
public:
    explicit ProductAccumulator(const Context& ctx)
        : ctx_(ctx), acc_(static_cast<std::size_t>(2 * ctx->degree() - 1), 0) {}

    void add_product(const WittApprox& a, const WittApprox& b) {
        const auto& x = a.coeffs();
        const auto& y = b.coeffs();
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; j < y.size(); ++j) {
                if (y[j] == 0) continue;
                mpz_addmul(acc_[i + j].get_mpz_t(), x[i].get_mpz_t(), y[j].get_mpz_t());
            }
        }
    }

    WittApprox result() {
        const auto m = static_cast<std::size_t>(ctx_->degree());
        const auto& f = ctx_->modulus();
        for (std::size_t k = acc_.size() - 1; k >= m; --k) {
            if (acc_[k] == 0) continue;
            const mpz_class c = acc_[k];
            for (std::size_t i = 0; i < m; ++i) acc_[k - m + i] -= c * f[i];
            acc_[k] = 0;
        }
        acc_.resize(m);
        WittApprox out(ctx_, std::move(acc_));
        acc_.assign(2 * m - 1, 0);
        return out;
    }

private:
    const Context& ctx_;
    std::vector<mpz_class> acc_;
};

}  // namespace

WMatrix::WMatrix(Context ctx, int rows, int cols)
    : ctx_(std::move(ctx)), rows_(rows), cols_(cols),
      e_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), WittApprox::zero(ctx_)) {
    if (rows < 1 || cols < 1) throw DimensionMismatch("matrix dimensions must be positive");
}

WMatrix::WMatrix(Context ctx, int rows, int cols, std::vector<WittApprox> entries)
    : ctx_(std::move(ctx)), rows_(rows), cols_(cols), e_(std::move(entries)) {
    if (rows < 1 || cols < 1) throw DimensionMismatch("matrix dimensions must be positive");
    if (e_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        throw DimensionMismatch("entry count does not match rows*cols");
    for (const auto& x : e_) require_same_context(ctx_, x.context());
}

WMatrix WMatrix::identity(const Context& ctx, int n) {
    WMatrix out(ctx, n, n);
    for (int i = 0; i < n; ++i) out(i, i) = WittApprox::one(ctx);
    return out;
}

WMatrix WMatrix::diagonal_p_powers(const Context& ctx, const std::vector<int>& exponents) {
    const int n = static_cast<int>(exponents.size());
    WMatrix out(ctx, n, n);
    for (int i = 0; i < n; ++i) out(i, i) = WittApprox::p_power(ctx, exponents[static_cast<std::size_t>(i)]);
    return out;
}

WMatrix WMatrix::from_integers(const Context& ctx, const std::vector<std::vector<long>>& rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r ? static_cast<int>(rows.front().size()) : 0;
    WMatrix out(ctx, r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != c)
            throw DimensionMismatch("ragged integer matrix");
        for (int j = 0; j < c; ++j)
            out(i, j) = WittApprox::from_integer(ctx, rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    return out;
}

bool WMatrix::operator==(const WMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && e_ == other.e_;
}

WMatrix WMatrix::transpose() const {
    WMatrix out(ctx_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

WMatrix WMatrix::times_p_power(int k) const {
    WMatrix out = *this;
    for (auto& x : out.e_) x = x.times_p_power(k);
    return out;
}

WMatrix WMatrix::divided_by_p_power(int k) const {
    if (k >= ctx_->precision()) throw PrecisionExhausted("division by p^k exhausts the precision", k + 1);
    auto smaller = PrimeContext::create(ctx_->p(), ctx_->degree(), ctx_->precision() - k);
    WMatrix out(smaller, rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i].divided_by_p_power(k).reduced_to(smaller);
    return out;
}

WMatrix WMatrix::reduced_to(const Context& smaller) const {
    WMatrix out(smaller, rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i].reduced_to(smaller);
    return out;
}

WMatrix WMatrix::block(int r0, int c0, int nrows, int ncols) const {
    if (r0 < 0 || c0 < 0 || r0 + nrows > rows_ || c0 + ncols > cols_)
        throw DimensionMismatch("block out of range");
    WMatrix out(ctx_, nrows, ncols);
    for (int i = 0; i < nrows; ++i)
        for (int j = 0; j < ncols; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
}

void WMatrix::swap_rows(int a, int b) {
    if (a == b) return;
    for (int j = 0; j < cols_; ++j) std::swap(e_[index(a, j)], e_[index(b, j)]);
}

void WMatrix::swap_cols(int a, int b) {
    if (a == b) return;
    for (int i = 0; i < rows_; ++i) std::swap(e_[index(i, a)], e_[index(i, b)]);
}

WMatrix matrix_multiply(const WMatrix& a, const WMatrix& b) {
    require_same_context(a.context(), b.context());
    if (a.cols() != b.rows())
        throw DimensionMismatch("inner dimensions differ: " + std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()));
    WMatrix out(a.context(), a.rows(), b.cols());
    ProductAccumulator acc(a.context());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < b.cols(); ++j) {
            for (int k = 0; k < a.cols(); ++k) acc.add_product(a(i, k), b(k, j));
            out(i, j) = acc.result();
        }
    }
    return out;
}

WMatrix block_diagonal(const std::vector<WMatrix>& blocks) {
    if (blocks.empty()) throw DimensionMismatch("no blocks");
    int n = 0;
    for (const auto& b : blocks) {
        require_same_context(blocks.front().context(), b.context());
        if (!b.is_square()) throw DimensionMismatch("blocks must be square");
        n += b.rows();
    }
    WMatrix out(blocks.front().context(), n, n);
    int offset = 0;
    for (const auto& b : blocks) {
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) out(offset + i, offset + j) = b(i, j);
        offset += b.rows();
    }
    return out;
}

WMatrix sigma_twist(const WMatrix& a, int k) {
    if (k < 0) throw BadParameters("sigma_twist needs k >= 0");
    if (k % a.context()->degree() == 0) return a;
    std::vector<WittApprox> entries;
    entries.reserve(a.entries().size());
    for (const auto& x : a.entries()) entries.push_back(x.frobenius_power(k));
    return WMatrix(a.context(), a.rows(), a.cols(), std::move(entries));
}

SmithDecomposition smith_decompose(const WMatrix& a, bool track_transforms) {
    if (!a.is_square()) throw DimensionMismatch("Smith decomposition needs a square matrix");
    const auto& ctx = a.context();
    const int n = a.rows();
    const int prec = ctx->precision();
    WMatrix b = a;
    SmithDecomposition out;
    if (track_transforms) {
        out.left = WMatrix::identity(ctx, n);
        out.right = WMatrix::identity(ctx, n);
    }

    for (int k = 0; k < n; ++k) {
        int best_v = prec, pi = -1, pj = -1;
        for (int i = k; i < n; ++i) {
            for (int j = k; j < n; ++j) {
                const Valuation v = b(i, j).valuation();
                if (v.is_exact() && v.value() < best_v) {
                    best_v = v.value();
                    pi = i;
                    pj = j;
                }
            }
        }
        if (pi < 0) {
            // Remaining block vanishes at this precision.
            for (int r = k; r < n; ++r) {
                out.vals.push_back(Valuation::at_least(prec));
                out.units.push_back(WittApprox::zero(ctx));
            }
            break;
        }
        b.swap_rows(k, pi);
        b.swap_cols(k, pj);
        if (track_transforms) {
            out.left.swap_rows(k, pi);
            out.right.swap_cols(k, pj);
        }
        const WittApprox unit = b(k, k).divided_by_p_power(best_v);
        const WittApprox unit_inv = unit.unit_inverse();
        out.vals.push_back(Valuation::exact(best_v));
        out.units.push_back(unit);

        for (int i = k + 1; i < n; ++i) {
            if (b(i, k).is_zero()) continue;
            const WittApprox factor = b(i, k).divided_by_p_power(best_v) * unit_inv;
            for (int j = k; j < n; ++j) {
                if (!b(k, j).is_zero()) b(i, j) -= factor * b(k, j);
            }
            if (track_transforms)
                for (int j = 0; j < n; ++j) out.left(i, j) -= factor * out.left(k, j);
        }
        for (int j = k + 1; j < n; ++j) {
            if (b(k, j).is_zero()) continue;
            const WittApprox factor = b(k, j).divided_by_p_power(best_v) * unit_inv;
            b(k, j) = WittApprox::zero(ctx);
            if (track_transforms)
                for (int i = 0; i < n; ++i) out.right(i, j) -= factor * out.right(i, k);
        }
    }
    return out;
}

ValList elementary_divisor_valuations(const WMatrix& a) {
    const int prec = a.context()->precision();
    const auto smith = smith_decompose(a, false);
    ValList out;
    int worst = 0;
    for (const auto& v : smith.vals) {
        if (!v.is_exact())
            throw SingularAtPrecision("matrix is singular modulo p^" + std::to_string(prec));
        out.push_back(v.value());
        worst = std::max(worst, v.value());
    }
    if (worst >= prec - 1)
        throw PrecisionExhausted("elementary divisor valuation " + std::to_string(worst) +
                                     " is not below N-1 = " + std::to_string(prec - 1),
                                 worst + 2);
    return out;
}

WMatrix scaled_inverse(const WMatrix& a, int t) {
    const auto& ctx = a.context();
    const auto smith = smith_decompose(a, true);
    int vmax = 0;
    for (const auto& v : smith.vals) {
        if (!v.is_exact()) throw SingularAtPrecision("cannot invert a matrix singular at this precision");
        vmax = std::max(vmax, v.value());
    }
    if (t < vmax)
        throw NonIntegralRescale("p^" + std::to_string(t) + " * A^{-1} is not integral (largest divisor p^" +
                                 std::to_string(vmax) + ")");
    const int kept = std::min(ctx->precision(), ctx->precision() + t - 2 * vmax);
    if (kept < 2)
        throw PrecisionExhausted("inverse leaves no trusted digits", 2 * vmax - t + 2);

    const int n = a.rows();
    // right * diag(p^{t - v_i} u_i^{-1}) * left
    WMatrix scaled_right = smith.right;
    for (int j = 0; j < n; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        const WittApprox factor = smith.units[sj].unit_inverse().times_p_power(t - smith.vals[sj].value());
        for (int i = 0; i < n; ++i) scaled_right(i, j) = scaled_right(i, j) * factor;
    }
    WMatrix full = scaled_right * smith.left;
    if (kept == ctx->precision()) return full;
    return full.reduced_to(PrimeContext::create(ctx->p(), ctx->degree(), kept));
}

PolyVal char_poly(const WMatrix& a) {
    if (!a.is_square()) throw DimensionMismatch("characteristic polynomial needs a square matrix");
    const auto& ctx = a.context();
    const int n = a.rows();
    const WittApprox zero = WittApprox::zero(ctx);

    // coefficients from the highest degree down
    std::vector<WittApprox> c{WittApprox::one(ctx), -a(0, 0)};
    for (int k = 1; k < n; ++k) {
        std::vector<WittApprox> toeplitz{WittApprox::one(ctx), -a(k, k)};
        std::vector<WittApprox> v(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = a(i, k);
        ProductAccumulator acc(ctx);
        for (int power = 0; power < k; ++power) {
            for (int j = 0; j < k; ++j) acc.add_product(a(k, j), v[static_cast<std::size_t>(j)]);
            toeplitz.push_back(-acc.result());
            if (power + 1 == k) break;
            std::vector<WittApprox> next(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < k; ++j) acc.add_product(a(i, j), v[static_cast<std::size_t>(j)]);
                next[static_cast<std::size_t>(i)] = acc.result();
            }
            v = std::move(next);
        }
        std::vector<WittApprox> next_c(static_cast<std::size_t>(k) + 2, zero);
        for (int i = 0; i <= k + 1; ++i) {
            for (int j = std::max(0, i - k - 1); j <= std::min(i, k); ++j)
                acc.add_product(toeplitz[static_cast<std::size_t>(i - j)], c[static_cast<std::size_t>(j)]);
            next_c[static_cast<std::size_t>(i)] = acc.result();
        }
        c = std::move(next_c);
    }

    PolyVal out;
    for (int i = 0; i <= n; ++i) {
        out.coeffs.push_back(c[static_cast<std::size_t>(n - i)]);
        out.vals.push_back(out.coeffs.back().valuation());
    }
    return out;
}

std::vector<Rational> newton_polygon_slopes(const PolyVal& pv, int denominator) {
    if (denominator < 1) throw BadParameters("denominator must be >= 1");
    const int r = pv.degree();
    if (r < 1) return {};
    if (!(pv.vals[static_cast<std::size_t>(r)] == Valuation::exact(0)))
        throw BadParameters("polynomial is not monic");
    const Valuation& constant = pv.vals[0];
    const int prec = pv.coeffs[0].context()->precision();
    if (!constant.is_exact() || constant.value() >= prec - 1)
        throw PrecisionExhausted("Newton polygon endpoint is not exact at precision " + std::to_string(prec),
                                 (constant.is_exact() ? constant.value() : prec) + 2);

    // Points (k, v(c_{r-k})); vanishing coefficients never lie on the hull
    // because every hull height is at most v(c_0) < N.
    std::vector<std::pair<long, long>> pts;
    for (int k = 0; k <= r; ++k) {
        const Valuation& v = pv.vals[static_cast<std::size_t>(r - k)];
        if (v.is_exact()) pts.emplace_back(k, v.value());
    }
    std::vector<std::pair<long, long>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& o = hull[hull.size() - 2];
            const auto& b = hull.back();
            const long cross = (b.first - o.first) * (pt.second - o.second) - (b.second - o.second) * (pt.first - o.first);
            if (cross <= 0) hull.pop_back();
            else break;
        }
        hull.push_back(pt);
    }
    std::vector<Rational> slopes;
    for (std::size_t s = 1; s < hull.size(); ++s) {
        const long dx = hull[s].first - hull[s - 1].first;
        const long dy = hull[s].second - hull[s - 1].second;
        const Rational slope(dy, dx * denominator);
        for (long i = 0; i < dx; ++i) slopes.push_back(slope);
    }
    return slopes;
}

}  // namespace fcrystal
