#pragma once

// Dense matrices over the truncated DVR W(F_{p^m}) / p^N: Smith-form
// valuations, Frobenius twists, characteristic polynomials, Newton polygons.

#include "fcrystal/rational.hpp"
#include "fcrystal/witt.hpp"

#include <vector>

namespace fcrystal {

class WMatrix {
public:
    WMatrix() = default;
    WMatrix(Context ctx, int rows, int cols);  // zero matrix
    WMatrix(Context ctx, int rows, int cols, std::vector<WittApprox> entries);

    static WMatrix identity(const Context& ctx, int n);
    // diag(p^{e_0}, ..., p^{e_{n-1}})
    static WMatrix diagonal_p_powers(const Context& ctx, const std::vector<int>& exponents);
    // Integer entries (constant polynomials), row-major nested lists.
    static WMatrix from_integers(const Context& ctx, const std::vector<std::vector<long>>& rows);

    const Context& context() const { return ctx_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    const WittApprox& operator()(int i, int j) const { return e_[index(i, j)]; }
    WittApprox& operator()(int i, int j) { return e_[index(i, j)]; }
    const std::vector<WittApprox>& entries() const { return e_; }

    bool operator==(const WMatrix& other) const;

    WMatrix transpose() const;
    WMatrix times_p_power(int k) const;
    WMatrix divided_by_p_power(int k) const;
    WMatrix reduced_to(const Context& smaller) const;
    // Rows/cols [r0, r0+n) x [c0, c0+n').
    WMatrix block(int r0, int c0, int nrows, int ncols) const;

    void swap_rows(int a, int b);
    void swap_cols(int a, int b);

private:
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j); }

    Context ctx_;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<WittApprox> e_;
};

// Nondecreasing list of elementary-divisor valuations.
using ValList = std::vector<int>;

// Coefficients of det(tI - A), c_0..c_r with c_r = 1, and their valuations.
struct PolyVal {
    std::vector<WittApprox> coeffs;
    std::vector<Valuation> vals;

    int degree() const { return static_cast<int>(vals.size()) - 1; }
};

WMatrix matrix_multiply(const WMatrix& a, const WMatrix& b);
inline WMatrix operator*(const WMatrix& a, const WMatrix& b) { return matrix_multiply(a, b); }
WMatrix block_diagonal(const std::vector<WMatrix>& blocks);

// Entrywise sigma^k.
WMatrix sigma_twist(const WMatrix& a, int k);

// Smith decomposition over the DVR: left * A * right = diag(p^{vals_i} units_i).
// Pivots on a minimum-valuation entry, ties broken by smallest (row, col).
// Entries that vanish at the working precision are reported as AtLeast(N).
struct SmithDecomposition {
    std::vector<Valuation> vals;
    std::vector<WittApprox> units;
    WMatrix left;
    WMatrix right;
};
SmithDecomposition smith_decompose(const WMatrix& a, bool track_transforms = true);

// Valuations e_1 <= ... <= e_r of the Smith form. Throws SingularAtPrecision
// when some divisor vanishes mod p^N and PrecisionExhausted when one reaches N-1.
ValList elementary_divisor_valuations(const WMatrix& a);

// p^t * A^{-1}; requires t >= largest elementary divisor valuation. The result
// is correct modulo p^{N + t - 2 e_max} and is returned in that context.
WMatrix scaled_inverse(const WMatrix& a, int t);

// Division-free (Berkowitz) characteristic polynomial.
PolyVal char_poly(const WMatrix& a);

// Lower convex hull of the points (k, v(c_{r-k})); slopes with multiplicity,
// divided by `denominator`, nondecreasing.
std::vector<Rational> newton_polygon_slopes(const PolyVal& pv, int denominator);

}  // namespace fcrystal
