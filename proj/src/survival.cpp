#include "curot/survival.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace curot::surv {

void validate(const SurvivalTable& t) {
    if (t.time.empty()) throw std::invalid_argument("SurvivalTable: empty table");
    if (t.event.size() != t.time.size() || t.risk.size() != t.time.size())
        throw std::invalid_argument("SurvivalTable: column lengths differ");
    for (std::size_t i = 0; i < t.time.size(); ++i) {
        if (!std::isfinite(t.time[i]) || t.time[i] < 0.0)
            throw std::invalid_argument("SurvivalTable: time must be finite and nonnegative at row " +
                                        std::to_string(i));
        if (t.event[i] > 1)
            throw std::invalid_argument("SurvivalTable: event must be 0 or 1 at row " +
                                        std::to_string(i));
        if (!std::isfinite(t.risk[i]))
            throw std::invalid_argument("SurvivalTable: risk must be finite at row " +
                                        std::to_string(i));
    }
}

ConcordanceResult concordance_index_pairs(const SurvivalTable& t) {
    validate(t);
    const std::size_t n = t.size();
    long pairs = 0;
    double score = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!t.event[i]) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const bool later = t.time[j] > t.time[i];
            const bool tied_mixed = t.time[j] == t.time[i] && !t.event[j];
            if (!later && !tied_mixed) continue;
            ++pairs;
            if (t.risk[i] > t.risk[j])
                score += 1.0;
            else if (t.risk[i] == t.risk[j])
                score += 0.5;
        }
    }
    if (pairs == 0) throw std::invalid_argument("concordance_index: no comparable pairs");
    return {score / static_cast<double>(pairs), pairs};
}

double concordance_index(const SurvivalTable& t) { return concordance_index_pairs(t).c_index; }

CoxResult cox_loss(const SurvivalTable& t) {
    validate(t);
    const std::size_t n = t.size();
    long n_events = 0;
    for (auto e : t.event) n_events += e;
    if (n_events == 0) throw std::invalid_argument("cox_loss: no events in table");

    // risks enter only through differences, so shift by the max for stable exps
    double rmax = t.risk[0];
    for (double r : t.risk) rmax = std::max(rmax, r);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return t.time[a] < t.time[b]; });

    // group samples by tied time, last group first: log-denominators are
    // suffix log-sum-exps over everything at risk at that time
    struct Group {
        std::size_t begin, end;  // half-open range into order
        double log_denom;
        long d;  // events at this time
    };
    std::vector<Group> groups;
    for (std::size_t lo = 0; lo < n;) {
        std::size_t hi = lo + 1;
        while (hi < n && t.time[order[hi]] == t.time[order[lo]]) ++hi;
        groups.push_back({lo, hi, 0.0, 0});
        lo = hi;
    }
    double suffix = 0.0;  // sum of exp(r - rmax) over later groups
    for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
        for (std::size_t p = it->begin; p < it->end; ++p) {
            suffix += std::exp(t.risk[order[p]] - rmax);
            it->d += t.event[order[p]];
        }
        it->log_denom = rmax + std::log(suffix);
    }

    double loss = 0.0;
    for (const auto& g : groups)
        for (std::size_t p = g.begin; p < g.end; ++p) {
            const std::size_t i = order[p];
            if (t.event[i]) loss -= t.risk[i] - g.log_denom;
        }
    loss /= static_cast<double>(n_events);

    // grad_k = -(1/E) * (delta_k - exp(r_k) * sum over event times with
    // t <= y_k of d / denom); the cumulative factor grows down the groups
    CoxResult res;
    res.loss = loss;
    res.gradient.assign(n, 0.0);
    double cum = 0.0;  // sum of d * exp(rmax - log_denom), one term per group
    for (const auto& g : groups) {
        if (g.d > 0) cum += static_cast<double>(g.d) * std::exp(rmax - g.log_denom);
        for (std::size_t p = g.begin; p < g.end; ++p) {
            const std::size_t i = order[p];
            const double soft = std::exp(t.risk[i] - rmax) * cum;
            res.gradient[i] = -(static_cast<double>(t.event[i]) - soft) /
                              static_cast<double>(n_events);
        }
    }
    return res;
}

double discrete_nll(const Matrix& hazards, const std::vector<int>& y,
                    const std::vector<std::uint8_t>& event) {
    const std::size_t n = hazards.rows;
    const int horizon = static_cast<int>(hazards.cols);
    if (n == 0 || horizon == 0) throw std::invalid_argument("discrete_nll: empty hazard grid");
    if (y.size() != n || event.size() != n)
        throw std::invalid_argument("discrete_nll: index/event lengths do not match hazards");
    for (std::size_t i = 0; i < hazards.data.size(); ++i)
        if (!(hazards.data[i] > 0.0) || !(hazards.data[i] < 1.0))
            throw std::invalid_argument("discrete_nll: hazards must lie strictly inside (0,1)");

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        auto log_surv_through = [&](int bins) {
            double s = 0.0;
            for (int j = 0; j < bins; ++j) s += std::log1p(-hazards(i, static_cast<std::size_t>(j)));
            return s;
        };
        if (event[i]) {
            if (y[i] < 1 || y[i] > horizon)
                throw std::invalid_argument("discrete_nll: event bin out of range at sample " +
                                            std::to_string(i));
            total -= log_surv_through(y[i]) +
                     std::log(hazards(i, static_cast<std::size_t>(y[i] - 1)));
        } else {
            if (y[i] < 0 || y[i] + 1 > horizon)
                throw std::invalid_argument(
                    "discrete_nll: censored bin needs y+1 within the grid at sample " +
                    std::to_string(i));
            total -= log_surv_through(y[i] + 1);
        }
    }
    return total / static_cast<double>(n);
}

namespace {

void validate_time_event(const std::vector<double>& times, const std::vector<std::uint8_t>& events,
                         const char* where) {
    if (times.empty()) throw std::invalid_argument(std::string(where) + ": empty group");
    if (times.size() != events.size())
        throw std::invalid_argument(std::string(where) + ": time/event lengths differ");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || times[i] < 0.0)
            throw std::invalid_argument(std::string(where) + ": bad time at row " +
                                        std::to_string(i));
        if (events[i] > 1)
            throw std::invalid_argument(std::string(where) + ": event must be 0 or 1 at row " +
                                        std::to_string(i));
    }
}

}  // namespace

KMCurve kaplan_meier(const std::vector<double>& times, const std::vector<std::uint8_t>& events) {
    validate_time_event(times, events, "kaplan_meier");
    const std::size_t n = times.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });

    KMCurve curve;
    curve.push_back({0.0, 1.0, static_cast<long>(n), 0});
    double s = 1.0;
    std::size_t pos = 0;
    while (pos < n) {
        const double tcur = times[order[pos]];
        long d = 0;
        std::size_t hi = pos;
        while (hi < n && times[order[hi]] == tcur) d += events[order[hi++]];
        const long at_risk = static_cast<long>(n - pos);
        if (d > 0) s *= 1.0 - static_cast<double>(d) / static_cast<double>(at_risk);
        curve.push_back({tcur, s, at_risk, d});
        pos = hi;
    }
    return curve;
}

LogRankResult logrank_test(const std::vector<double>& times_a,
                           const std::vector<std::uint8_t>& events_a,
                           const std::vector<double>& times_b,
                           const std::vector<std::uint8_t>& events_b) {
    validate_time_event(times_a, events_a, "logrank_test");
    validate_time_event(times_b, events_b, "logrank_test");

    std::vector<double> event_times;
    for (std::size_t i = 0; i < times_a.size(); ++i)
        if (events_a[i]) event_times.push_back(times_a[i]);
    for (std::size_t i = 0; i < times_b.size(); ++i)
        if (events_b[i]) event_times.push_back(times_b[i]);
    if (event_times.empty()) throw std::invalid_argument("logrank_test: no events in either group");
    std::sort(event_times.begin(), event_times.end());
    event_times.erase(std::unique(event_times.begin(), event_times.end()), event_times.end());

    auto at_risk = [](const std::vector<double>& ts, double t) {
        long c = 0;
        for (double x : ts) c += x >= t;
        return c;
    };
    auto deaths = [](const std::vector<double>& ts, const std::vector<std::uint8_t>& ev, double t) {
        long c = 0;
        for (std::size_t i = 0; i < ts.size(); ++i) c += ts[i] == t && ev[i];
        return c;
    };

    double o_minus_e = 0.0, var = 0.0;
    for (double t : event_times) {
        const double n1 = static_cast<double>(at_risk(times_a, t));
        const double n2 = static_cast<double>(at_risk(times_b, t));
        const double nt = n1 + n2;
        const double d1 = static_cast<double>(deaths(times_a, events_a, t));
        const double d2 = static_cast<double>(deaths(times_b, events_b, t));
        const double dt = d1 + d2;
        if (nt <= 0.0 || dt <= 0.0) continue;
        o_minus_e += d1 - dt * n1 / nt;
        if (nt > 1.0) var += dt * (n1 / nt) * (n2 / nt) * (nt - dt) / (nt - 1.0);
    }
    if (var <= 0.0) return {0.0, 1.0};  // degenerate tables carry no information
    const double chi = o_minus_e * o_minus_e / var;
    return {chi, std::erfc(std::sqrt(0.5 * chi))};
}

RiskGroups risk_stratify(const std::vector<double>& risks, MedianTies ties) {
    if (risks.size() < 2) throw std::invalid_argument("risk_stratify: need at least two samples");
    for (double r : risks)
        if (!std::isfinite(r)) throw std::invalid_argument("risk_stratify: risks must be finite");

    std::vector<double> sorted = risks;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median =
        n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    RiskGroups g;
    for (std::size_t i = 0; i < risks.size(); ++i) {
        const bool high = ties == MedianTies::to_low ? risks[i] > median : risks[i] >= median;
        (high ? g.high : g.low).push_back(i);
    }
    if (g.high.empty() || g.low.empty())
        throw std::invalid_argument("risk_stratify: degenerate stratification");
    return g;
}

}  // namespace curot::surv
