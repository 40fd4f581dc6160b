#pragma once

#include <cstdint>
#include <vector>

#include "curot/linalg.hpp"

namespace curot::surv {

// Per-sample observation: follow-up time, whether the event was observed
// (1) or the sample was censored (0), and the model's risk score.
struct SurvivalTable {
    std::vector<double> time;
    std::vector<std::uint8_t> event;
    std::vector<double> risk;
    std::size_t size() const { return time.size(); }
};

void validate(const SurvivalTable& t);

struct ConcordanceResult {
    double c_index = 0.0;
    long n_pairs = 0;
};

// Harrell rules: a pair is comparable when the shorter time is an event, or
// when times tie and exactly one of the two is an event (the event sample is
// the one expected to carry the higher risk). Risk ties score 0.5.
ConcordanceResult concordance_index_pairs(const SurvivalTable& t);
double concordance_index(const SurvivalTable& t);

struct CoxResult {
    double loss = 0.0;
    std::vector<double> gradient;
};

// Negative mean Cox partial log-likelihood with Breslow handling of tied
// event times, plus its closed-form gradient with respect to the risks.
CoxResult cox_loss(const SurvivalTable& t);

// hazards is n x T with entries strictly inside (0,1); y holds 1-based bin
// indices. Events need 1 <= y <= T; censored samples need y+1 <= T (y = 0 is
// a censoring before the first bin).
double discrete_nll(const Matrix& hazards, const std::vector<int>& y,
                    const std::vector<std::uint8_t>& event);

struct KMPoint {
    double time = 0.0;
    double survival = 1.0;
    long at_risk = 0;
    long events = 0;
};
// Product-limit curve. First point is the synthetic (t=0, S=1) start; then
// one point per distinct observed time. Censored-only times keep S and only
// record the at-risk count.
using KMCurve = std::vector<KMPoint>;
KMCurve kaplan_meier(const std::vector<double>& times, const std::vector<std::uint8_t>& events);

struct LogRankResult {
    double chi_square = 0.0;
    double p_value = 1.0;
};

// One-degree-of-freedom log-rank statistic from the hypergeometric
// observed-vs-expected decomposition at each pooled event time.
LogRankResult logrank_test(const std::vector<double>& times_a,
                           const std::vector<std::uint8_t>& events_a,
                           const std::vector<double>& times_b,
                           const std::vector<std::uint8_t>& events_b);

enum class MedianTies { to_low, to_high };

struct RiskGroups {
    std::vector<std::size_t> high;
    std::vector<std::size_t> low;
};

// Median split of the risks. Samples exactly at the median follow the tie
// rule (default: low group). Throws when either side ends up empty.
RiskGroups risk_stratify(const std::vector<double>& risks, MedianTies ties = MedianTies::to_low);

}  // namespace curot::surv
