#pragma once

// F-crystals given by the matrix of a sigma-linear map: iterates, Hodge and
// Newton data, alpha/beta/delta, rescaling, twisted duals, direct sums.

#include "fcrystal/dvr_linalg.hpp"
#include "fcrystal/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace fcrystal {

struct SlopeData {
    ValList hodge;                     // e_1 <= ... <= e_r
    std::map<int, int> hodge_numbers;  // i -> #{j : e_j = i}
    std::vector<Rational> newton;      // nondecreasing, with multiplicity
    bool isoclinic = false;
    std::optional<Rational> lambda;    // set iff isoclinic
    bool ordinary = false;             // all Hodge slopes equal

    int rank() const { return static_cast<int>(hodge.size()); }
    int hodge_sum() const;
    int max_hodge() const { return hodge.back(); }
    int min_hodge() const { return hodge.front(); }
};

struct AlphaBetaDelta {
    int q = 0;
    int alpha = 0;
    int beta = 0;
    int delta = 0;

    bool operator==(const AlphaBetaDelta&) const = default;
};

// phi^T = p^s * (unit matrix).
struct Period {
    int length = 0;
    int s = 0;

    bool operator==(const Period&) const = default;
};

class FCrystal {
public:
    // Column j of `matrix` holds phi(v_j). `summand_sizes`, when non-empty,
    // declares a block-diagonal structure that the matrix must respect.
    static FCrystal create(WMatrix matrix, std::vector<int> summand_sizes = {});

    const Context& context() const { return a_.context(); }
    int rank() const { return a_.rows(); }
    const WMatrix& matrix() const { return a_; }
    const ValList& hodge() const { return hodge_; }
    const std::vector<int>& summand_sizes() const { return sizes_; }
    bool has_summands() const { return sizes_.size() > 1; }
    // The declared blocks as crystals (just this crystal when none are declared).
    std::vector<FCrystal> summands() const;

    // Matrix of phi^q: A * sigma(A) * ... * sigma^{q-1}(A). Needs N >= q*e_r + 2.
    WMatrix iterate(int q) const;
    // Smallest precision at which iterate(q) is trusted.
    int precision_needed(int q) const;

    const SlopeData& slope_data() const;
    AlphaBetaDelta alpha_beta_delta(int q) const;

    // p^t * phi; t < 0 divides and loses |t| digits of precision.
    FCrystal rescale(int t) const;
    // (M^*, p^{e_r} phi^*): matrix p^{e_r} * A^{-T}, valid at precision N - e_r.
    FCrystal dual_twisted() const;
    // Same crystal read at a lower precision.
    FCrystal reduced_to(const Context& smaller) const;

    // Smallest T <= max_q with phi^T = p^s * unit.
    std::optional<Period> detect_period(int max_q) const;

    // For a monomial matrix (one nonzero entry per row and column): the
    // permutation pi with A(pi(j), j) != 0, 0-based.
    std::optional<std::vector<int>> monomial_permutation() const;
    // A monomial crystal whose permutation has >= 2 cycles, rewritten in a basis
    // grouped by cycle (each cycle in increasing index order) with the cycles
    // declared as summands.
    std::optional<FCrystal> split_monomial_cycles() const;

private:
    struct Cache;

    FCrystal(WMatrix a, ValList hodge, std::vector<int> sizes);

    WMatrix a_;
    ValList hodge_;
    std::vector<int> sizes_;
    std::shared_ptr<Cache> cache_;
};

FCrystal direct_sum(const std::vector<FCrystal>& parts);

}  // namespace fcrystal
