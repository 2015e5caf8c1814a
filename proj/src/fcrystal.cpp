#include "fcrystal/fcrystal.hpp"

#include "fcrystal/errors.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

namespace fcrystal {

int SlopeData::hodge_sum() const { return std::accumulate(hodge.begin(), hodge.end(), 0); }

struct FCrystal::Cache {
    std::mutex mu;
    std::map<int, WMatrix> iterates;
    std::once_flag slopes_once;
    std::optional<SlopeData> slopes;
};

FCrystal::FCrystal(WMatrix a, ValList hodge, std::vector<int> sizes)
    : a_(std::move(a)), hodge_(std::move(hodge)), sizes_(std::move(sizes)), cache_(std::make_shared<Cache>()) {}

FCrystal FCrystal::create(WMatrix matrix, std::vector<int> summand_sizes) {
    if (!matrix.is_square()) throw DimensionMismatch("crystal matrix must be square");
    const int r = matrix.rows();
    if (!summand_sizes.empty()) {
        int total = 0;
        for (int s : summand_sizes) {
            if (s < 1) throw BadParameters("summand sizes must be positive");
            total += s;
        }
        if (total != r)
            throw BadParameters("summand sizes sum to " + std::to_string(total) + ", rank is " + std::to_string(r));
        int start = 0;
        for (int s : summand_sizes) {
            for (int i = 0; i < r; ++i) {
                const bool row_in = i >= start && i < start + s;
                for (int j = start; j < start + s; ++j) {
                    if (!row_in && !matrix(i, j).is_zero())
                        throw BadParameters("matrix is not block diagonal for the declared summands (entry " +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
                }
            }
            start += s;
        }
        if (summand_sizes.size() == 1) summand_sizes.clear();
    }
    ValList hodge = elementary_divisor_valuations(matrix);
    return FCrystal(std::move(matrix), std::move(hodge), std::move(summand_sizes));
}

std::vector<FCrystal> FCrystal::summands() const {
    if (!has_summands()) return {*this};
    std::vector<FCrystal> out;
    int start = 0;
    for (int s : sizes_) {
        out.push_back(create(a_.block(start, start, s, s)));
        start += s;
    }
    return out;
}

int FCrystal::precision_needed(int q) const { return q * hodge_.back() + 2; }

WMatrix FCrystal::iterate(int q) const {
    if (q < 1) throw BadParameters("iterate needs q >= 1");
    if (context()->precision() < precision_needed(q))
        throw PrecisionExhausted("phi^" + std::to_string(q) + " needs precision " +
                                     std::to_string(precision_needed(q)),
                                 precision_needed(q));
    if (q == 1) return a_;
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        auto it = cache_->iterates.find(q);
        if (it != cache_->iterates.end()) return it->second;
    }
    bool have_previous = false;
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        have_previous = q == 2 || cache_->iterates.count(q - 1) > 0;
    }
    // iterate(q1 + q2) = iterate(q1) * sigma^{q1}(iterate(q2))
    WMatrix value = have_previous ? iterate(q - 1) * sigma_twist(a_, q - 1)
                                  : iterate(q / 2) * sigma_twist(iterate(q - q / 2), q / 2);
    std::lock_guard<std::mutex> lock(cache_->mu);
    return cache_->iterates.emplace(q, std::move(value)).first->second;
}

const SlopeData& FCrystal::slope_data() const {
    std::call_once(cache_->slopes_once, [this] {
        SlopeData sd;
        sd.hodge = hodge_;
        for (int e : hodge_) ++sd.hodge_numbers[e];
        const int m = context()->degree();
        const int need = std::max(precision_needed(m), m * sd.hodge_sum() + 2);
        if (context()->precision() < need)
            throw PrecisionExhausted("Newton slopes need precision " + std::to_string(need), need);
        sd.newton = newton_polygon_slopes(char_poly(iterate(m)), m);
        sd.isoclinic = sd.newton.front() == sd.newton.back();
        if (sd.isoclinic) sd.lambda = Rational(sd.hodge_sum(), rank());
        sd.ordinary = hodge_.front() == hodge_.back();
        cache_->slopes = std::move(sd);
    });
    return *cache_->slopes;
}

AlphaBetaDelta FCrystal::alpha_beta_delta(int q) const {
    const ValList vals = elementary_divisor_valuations(iterate(q));
    AlphaBetaDelta out;
    out.q = q;
    out.alpha = vals.front();
    out.beta = vals.back();
    out.delta = out.beta - out.alpha;
    return out;
}

FCrystal FCrystal::rescale(int t) const {
    if (t == 0) return *this;
    if (t < -hodge_.front())
        throw NonIntegralRescale("p^" + std::to_string(t) + " * phi is not integral (smallest Hodge slope " +
                                 std::to_string(hodge_.front()) + ")");
    WMatrix scaled = t > 0 ? a_.times_p_power(t) : a_.divided_by_p_power(-t);
    ValList hodge = hodge_;
    for (int& e : hodge) e += t;
    if (t > 0 && hodge.back() >= scaled.context()->precision() - 1)
        throw PrecisionExhausted("rescaled Hodge slopes reach the precision", hodge.back() + 2);
    return FCrystal(std::move(scaled), std::move(hodge), sizes_);
}

FCrystal FCrystal::dual_twisted() const {
    const int e = hodge_.back();
    return create(scaled_inverse(a_, e).transpose(), sizes_);
}

FCrystal FCrystal::reduced_to(const Context& smaller) const {
    if (smaller->same_as(*context())) return *this;
    return create(a_.reduced_to(smaller), sizes_);
}

std::optional<Period> FCrystal::detect_period(int max_q) const {
    for (int t = 1; t <= max_q; ++t) {
        const auto abd = alpha_beta_delta(t);
        if (abd.delta == 0) return Period{t, abd.alpha};
    }
    return std::nullopt;
}

std::optional<std::vector<int>> FCrystal::monomial_permutation() const {
    const int r = rank();
    std::vector<int> perm(static_cast<std::size_t>(r), -1);
    std::vector<bool> row_used(static_cast<std::size_t>(r), false);
    for (int j = 0; j < r; ++j) {
        for (int i = 0; i < r; ++i) {
            if (a_(i, j).is_zero()) continue;
            if (perm[static_cast<std::size_t>(j)] >= 0 || row_used[static_cast<std::size_t>(i)]) return std::nullopt;
            perm[static_cast<std::size_t>(j)] = i;
            row_used[static_cast<std::size_t>(i)] = true;
        }
        if (perm[static_cast<std::size_t>(j)] < 0) return std::nullopt;
    }
    return perm;
}

std::optional<FCrystal> FCrystal::split_monomial_cycles() const {
    const auto perm = monomial_permutation();
    if (!perm) return std::nullopt;
    const int r = rank();
    std::vector<bool> seen(static_cast<std::size_t>(r), false);
    std::vector<int> order;
    std::vector<int> sizes;
    for (int start = 0; start < r; ++start) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        std::vector<int> cycle;
        for (int j = start; !seen[static_cast<std::size_t>(j)]; j = (*perm)[static_cast<std::size_t>(j)]) {
            seen[static_cast<std::size_t>(j)] = true;
            cycle.push_back(j);
        }
        std::sort(cycle.begin(), cycle.end());
        order.insert(order.end(), cycle.begin(), cycle.end());
        sizes.push_back(static_cast<int>(cycle.size()));
    }
    if (sizes.size() < 2) return std::nullopt;
    WMatrix b(context(), r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            b(i, j) = a_(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    return FCrystal(std::move(b), hodge_, std::move(sizes));
}

FCrystal direct_sum(const std::vector<FCrystal>& parts) {
    if (parts.empty()) throw BadParameters("direct sum of no crystals");
    if (parts.size() == 1) return parts.front();
    std::vector<WMatrix> blocks;
    std::vector<int> sizes;
    for (const auto& part : parts) {
        require_same_context(parts.front().context(), part.context());
        blocks.push_back(part.matrix());
        if (part.has_summands())
            sizes.insert(sizes.end(), part.summand_sizes().begin(), part.summand_sizes().end());
        else
            sizes.push_back(part.rank());
    }
    return FCrystal::create(block_diagonal(blocks), std::move(sizes));
}

}  // namespace fcrystal
