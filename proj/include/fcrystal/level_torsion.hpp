#pragma once

// Level torsion and isomorphism numbers of F-crystals, with certificates, plus
// the closed-form upper bounds.

#include "fcrystal/fcrystal.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fcrystal {

enum class CertificateKind { Period, BoundAttained, HorizonExhausted };

struct Certificate {
    CertificateKind kind = CertificateKind::HorizonExhausted;
    int value = 0;  // T for Period, Q for HorizonExhausted

    static Certificate period(int t) { return {CertificateKind::Period, t}; }
    static Certificate bound_attained() { return {CertificateKind::BoundAttained, 0}; }
    static Certificate horizon_exhausted(int q) { return {CertificateKind::HorizonExhausted, q}; }

    bool operator==(const Certificate&) const = default;
    // "Period(3)", "BoundAttained", "HorizonExhausted(40)"
    std::string to_string() const;
};

struct LevelTorsionResult {
    int lower = 0;
    int upper = 0;
    bool exact = false;
    Certificate certificate;
    // q = 1..min(Q, T). For cross terms alpha belongs to the steeper summand,
    // beta to the flatter one, and delta is clamped at 0.
    std::vector<AlphaBetaDelta> trace;
    // Set when the value was settled by the ordinary / non-ordinary rule
    // instead of a nonzero delta.
    bool epsilon_rule = false;
};

enum class NKind { Equal, UpperBoundOnly, FamilyFormula };

struct NStatus {
    NKind kind = NKind::UpperBoundOnly;
    std::optional<int> value;
    std::string note;

    std::string kind_name() const;
};

struct IsoReport {
    SlopeData slope_data;
    std::optional<LevelTorsionResult> ell;
    NStatus n;
    std::map<std::string, int> bounds;
    int horizon = 0;
};

// Theorem-style bound floor(e*l2 + (l1 - l2)*lambda) computed after shifting
// the Hodge slopes so that the smallest is 0; l1 / l2 count slopes below /
// above lambda.
int theorem12_bound(const SlopeData& sd);
int theorem12_bound(const ValList& hodge, const Rational& lambda);
// floor(2cd / (c + d))
int pdiv_bound(int c, int d);
// min{s, r*e_r - s}, s = sum of Hodge slopes
int quasi_special_bound(const ValList& hodge);
int quasi_special_bound(const SlopeData& sd);
// max{1, n_i, n_i + n_j - 1 : i != j}; a single value is returned unchanged.
int direct_sum_estimate(const std::vector<int>& n_values);

// 4 r (e_r + 1)
int default_horizon(int rank, int max_hodge);
// max(Q e_r + 2, m s + 2)
int required_precision(int max_hodge, int hodge_sum, int degree, int horizon);

// Alpha/beta for every q, using phi^T = p^s * unit to extend past a period.
class DeltaScan {
public:
    DeltaScan(const FCrystal& crystal, int horizon);

    const std::optional<Period>& period() const { return period_; }
    int horizon() const { return horizon_; }
    // Trace for q = 1..min(horizon, T).
    const std::vector<AlphaBetaDelta>& trace() const { return trace_; }
    // Defined for q <= horizon, and for every q when a period was found.
    AlphaBetaDelta at(int q) const;

private:
    int horizon_;
    std::vector<AlphaBetaDelta> trace_;
    std::optional<Period> period_;
};

LevelTorsionResult level_torsion_isoclinic(const FCrystal& m, int horizon);
// Scan of max{0, beta_j(q) - alpha_i(q)} for isoclinic summands with
// lambda_j <= lambda_i.
LevelTorsionResult cross_level(const FCrystal& mj, const FCrystal& mi, int horizon);
LevelTorsionResult level_torsion_sum(const std::vector<FCrystal>& summands, int horizon);

// horizon <= 0 selects default_horizon.
IsoReport isomorphism_number(const FCrystal& m, int horizon = 0);

}  // namespace fcrystal
