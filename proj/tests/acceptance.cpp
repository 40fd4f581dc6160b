// Integration gate: twelve go/no-go checks over the whole library plus the
// command-line binary (its path arrives as argv[1]). Each check prints one
// PASS/FAIL line with its measured numbers; the exit status is the number of
// failed checks.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#ifndef _WIN32
#include <sys/wait.h>
#endif

#include "curot/apart.hpp"
#include "curot/io.hpp"
#include "curot/linalg.hpp"
#include "curot/ot.hpp"
#include "curot/survival.hpp"
#include "curot/together.hpp"
#include "testutil.hpp"

using namespace curot;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string num(double v) { return io::format_double(v); }

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max({std::abs(got), std::abs(want), 1e-6});
}

double plan_mass(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data) s += v;
    return s;
}

// --- 1. sink accounting --------------------------------------------------

Outcome check_sink_accounting() {
    Stopwatch watch;
    testutil::Rng rng(101);
    const double rhos[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    ot::SolverConfig cfg;
    double worst_sink = 0.0, worst_mass = 0.0;
    for (int inst = 0; inst < 200; ++inst) {
        const std::size_t n = rng.integer(2, 32), k = rng.integer(2, 8);
        const double rho = rhos[inst % 5];
        const ot::CostMatrix cost{testutil::random_matrix(rng, n, k, 0.0, 3.0), false};
        const auto res = ot::solve_uot_curriculum(cost, rho, cfg);
        double sink = 0.0;
        for (double s : res.sink_mass) sink += s;
        worst_sink = std::max(worst_sink, std::abs(sink - (1.0 - rho)));
        worst_mass = std::max(worst_mass, std::abs(plan_mass(res.plan.values) - rho));
    }
    const double elapsed = watch.seconds();
    const bool ok = worst_sink <= 1e-6 && worst_mass <= 1e-6 && elapsed < 10.0;
    return {ok, "max|sink-(1-rho)|=" + num(worst_sink) + " max|mass-rho|=" + num(worst_mass) +
                    " elapsed=" + num(elapsed) + "s over 200 instances"};
}

// --- 2. sampled-oracle equivalence ----------------------------------------

Outcome check_oracle_equivalence() {
    Stopwatch watch;
    testutil::Rng rng(202);
    ot::SolverConfig cfg;
    cfg.epsilon = 0.01;  // keeps the entropic bias well under the 5% budget
    cfg.max_iters = 20000;
    double worst_rel = 0.0, worst_feas = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
        const std::size_t n = rng.integer(2, 8), k = rng.integer(2, 4);
        const double rho = rng.uniform(0.3, 0.9);
        const ot::CostMatrix cost{testutil::random_matrix(rng, n, k, 0.0, 3.0), false};
        const auto res = ot::solve_uot_curriculum(cost, rho, cfg);
        if (!res.plan.converged)
            return {false, "solver did not converge on instance " + std::to_string(inst)};

        const double cap = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                if (res.plan.values(i, j) < -1e-12)
                    return {false, "negative plan entry on instance " + std::to_string(inst)};
                row += res.plan.values(i, j);
            }
            worst_feas = std::max(worst_feas, row - cap);
        }
        worst_feas = std::max(worst_feas, std::abs(plan_mass(res.plan.values) - rho));

        const auto oracle =
            ot::oracle_uot_curriculum(cost, rho, cfg.gamma, 100000, 7000 + inst);
        const double got = ot::curriculum_objective(res.plan.values, cost.values, rho, cfg.gamma);
        worst_rel = std::max(worst_rel, std::abs(got - oracle.best_objective) /
                                            std::max(std::abs(oracle.best_objective), 1e-9));
    }
    const double elapsed = watch.seconds();
    const bool ok = worst_rel <= 0.05 && worst_feas <= 1e-6 && elapsed < 120.0;
    return {ok, "max objective gap=" + num(worst_rel * 100.0) + "% max infeasibility=" +
                    num(worst_feas) + " elapsed=" + num(elapsed) + "s over 50 instances"};
}

// --- 3. rho=1 reduction ----------------------------------------------------

Outcome check_reduction_law() {
    testutil::Rng rng(303);
    ot::SolverConfig cfg;
    double worst = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
        const std::size_t n = rng.integer(2, 10), k = rng.integer(2, 6);
        const ot::CostMatrix cost{testutil::random_matrix(rng, n, k, 0.0, 3.0), false};
        const std::vector<double> a(n, 1.0 / static_cast<double>(n));
        const auto full = ot::solve_uot_curriculum(cost, 1.0, cfg);
        const auto plain = ot::solve_uot_kl(cost, a, std::nullopt, cfg);
        worst = std::max(worst, testutil::max_abs_diff(full.plan.values, plain.values));
        for (double s : full.sink_mass) worst = std::max(worst, std::abs(s));
    }
    return {worst <= 1e-5, "max elementwise diff=" + num(worst) + " over 50 instances"};
}

// --- 4. balanced limit -----------------------------------------------------

Outcome check_balanced_limit() {
    testutil::Rng rng(404);
    ot::SolverConfig strict;
    strict.gamma = 1e9;
    strict.iota = 1e15;  // keep the sink weight dominant over gamma
    strict.tol = 1e-12;
    strict.max_iters = 10000;
    ot::SolverConfig even = strict;
    even.gamma = 0.1;
    even.iota = 1e9;
    double worst = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
        const std::size_t n = rng.integer(2, 10), k = rng.integer(2, 6);
        const ot::CostMatrix cost{testutil::random_matrix(rng, n, k, 0.0, 3.0), false};
        const std::vector<double> a(n, 1.0 / static_cast<double>(n));
        const std::vector<double> b(k, 1.0 / static_cast<double>(k));
        const auto relaxed = ot::solve_uot_kl(cost, a, b, strict);
        const auto exact = ot::solve_balanced(cost, a, b, even);
        worst = std::max(worst, testutil::max_abs_diff(relaxed.values, exact.values));
    }
    return {worst <= 1e-6, "max elementwise diff=" + num(worst) + " over 50 instances"};
}

// --- 5. proximal operator limits -------------------------------------------

Outcome check_prox_limits() {
    testutil::Rng rng(505);
    const double inf = std::numeric_limits<double>::infinity();
    double worst_limit = 0.0, worst_mid = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double y = rng.uniform(0.05, 3.0);
        const double b = rng.uniform(0.05, 3.0);
        const double eps = rng.uniform(0.01, 1.0);
        const double gamma = rng.uniform(0.01, 100.0);

        // f = 0 leaves the point alone, f = 1 projects onto the target
        const double at_zero = ot::prox_weighted_kl({y}, {b}, {0.0}, eps)[0];
        const double at_one = ot::prox_weighted_kl({y}, {b}, {inf}, eps)[0];
        worst_limit = std::max({worst_limit, std::abs(at_zero - y), std::abs(at_one - b)});

        const double got = ot::prox_weighted_kl({y}, {b}, {gamma}, eps)[0];
        // independent reference: root of the strictly increasing derivative
        // gamma*log(x/b) + eps*log(x/y) of the penalized objective
        const auto deriv = [&](double x) {
            return gamma * std::log(x / b) + eps * std::log(x / y);
        };
        const double lo = std::min(b, y) * 0.5, hi = std::max(b, y) * 2.0;
        const double want = testutil::bisect_increasing_root(deriv, lo, hi);
        worst_mid = std::max(worst_mid, std::abs(got - want));
    }
    const bool ok = worst_limit == 0.0 && worst_mid <= 1e-8;
    return {ok, "limit error=" + num(worst_limit) + " mid-f error=" + num(worst_mid) +
                    " over 100 scalars"};
}

// --- 6. warm-up schedule ----------------------------------------------------

Outcome check_schedule() {
    testutil::Rng rng(606);
    bool monotone = true, endpoint = true;
    for (int trial = 0; trial < 20; ++trial) {
        ot::CurriculumSchedule sched;
        sched.rho_base = rng.uniform(0.0, 0.9);
        sched.rho_upper = rng.uniform(sched.rho_base + 0.01, 1.0);
        sched.horizon = static_cast<long>(rng.integer(1, 100));
        double prev = -1.0;
        for (long t = 0; t <= sched.horizon; ++t) {
            const double r = ot::rho_schedule(t, sched);
            monotone = monotone && r >= prev;
            prev = r;
        }
        endpoint = endpoint && ot::rho_schedule(sched.horizon, sched) == sched.rho_upper;
    }
    const ot::CurriculumSchedule defaults{0.1, 1.0, 30};
    const double start_err =
        std::abs(ot::rho_schedule(0, defaults) - (0.1 + 0.9 * std::exp(-5.0)));
    const bool ok = monotone && endpoint && start_err <= 1e-12;
    return {ok, std::string("monotone=") + (monotone ? "yes" : "no") + " exact endpoint=" +
                    (endpoint ? "yes" : "no") + " start error=" + num(start_err)};
}

// --- 7. gradient checks -----------------------------------------------------

Outcome check_gradients() {
    testutil::Rng rng(707);
    const double h = 1e-5;
    double worst_cox = 0.0, worst_cox_sum = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t n = rng.integer(3, 12);
        surv::SurvivalTable t;
        bool any_event = false;
        for (std::size_t i = 0; i < n; ++i) {
            t.time.push_back(static_cast<double>(rng.integer(1, 6)));
            t.event.push_back(rng.uniform() < 0.6 ? 1 : 0);
            t.risk.push_back(rng.normal());
            any_event = any_event || t.event.back();
        }
        if (!any_event) t.event[0] = 1;
        const auto res = surv::cox_loss(t);
        double grad_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            grad_sum += res.gradient[i];
            surv::SurvivalTable hi = t, lo = t;
            hi.risk[i] += h;
            lo.risk[i] -= h;
            const double fd = (surv::cox_loss(hi).loss - surv::cox_loss(lo).loss) / (2.0 * h);
            worst_cox = std::max(worst_cox, rel_err(res.gradient[i], fd));
        }
        worst_cox_sum = std::max(worst_cox_sum, std::abs(grad_sum));
    }

    double worst_con = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t d = rng.integer(2, 5);
        apart::AnchorPair anchors;
        anchors.tau_r = rng.uniform(0.25, 1.0);
        anchors.phi = Matrix(d, d);
        for (double& v : anchors.phi.data) v = rng.normal();
        for (std::size_t i = 0; i < d; ++i) anchors.phi(i, i) += 2.0;
        for (std::size_t i = 0; i < d; ++i) {
            anchors.a_p.push_back(rng.normal());
            anchors.a_g.push_back(rng.normal());
        }
        Matrix h_p(rng.integer(1, 4), d), h_g(rng.integer(1, 4), d);
        for (double& v : h_p.data) v = rng.normal();
        for (double& v : h_g.data) v = rng.normal();

        const auto grads = apart::contrastive_grad(h_p, h_g, anchors);
        const auto forward = [&](const Matrix& hp, const Matrix& hg,
                                 const apart::AnchorPair& an) {
            return apart::contrastive_loss(
                apart::anchor_scores(apart::mean_token(hp), an, Modality::pathology),
                apart::anchor_scores(apart::mean_token(hg), an, Modality::genomics));
        };
        auto probe = [&](double* slot, double analytic) {
            const double keep = *slot;
            *slot = keep + h;
            const double up = forward(h_p, h_g, anchors);
            *slot = keep - h;
            const double dn = forward(h_p, h_g, anchors);
            *slot = keep;
            worst_con = std::max(worst_con, rel_err(analytic, (up - dn) / (2.0 * h)));
        };
        for (std::size_t i = 0; i < h_p.data.size(); ++i)
            probe(&h_p.data[i], grads.d_h_p.data[i]);
        for (std::size_t i = 0; i < h_g.data.size(); ++i)
            probe(&h_g.data[i], grads.d_h_g.data[i]);
        for (std::size_t i = 0; i < d; ++i) probe(&anchors.a_p[i], grads.d_a_p[i]);
        for (std::size_t i = 0; i < d; ++i) probe(&anchors.a_g[i], grads.d_a_g[i]);
    }

    const bool ok = worst_cox <= 1e-4 && worst_con <= 1e-4 && worst_cox_sum <= 1e-10;
    return {ok, "partial-likelihood rel err=" + num(worst_cox) + " (grad sum " +
                    num(worst_cox_sum) + "), contrastive rel err=" + num(worst_con) +
                    " over 100+100 instances"};
}

// --- 8. concordance oracle ---------------------------------------------------

Outcome check_cindex_oracle() {
    testutil::Rng rng(808);
    for (int table = 0; table < 500; ++table) {
        surv::SurvivalTable t;
        long pairs = 0;
        double score = 0.0;
        do {
            t = {};
            const std::size_t n = rng.integer(2, 50);
            for (std::size_t i = 0; i < n; ++i) {
                t.time.push_back(static_cast<double>(rng.integer(1, 8)));
                t.event.push_back(rng.uniform() < 0.5 ? 1 : 0);
                t.risk.push_back(0.25 * static_cast<double>(rng.integer(0, 4)));
            }
            pairs = 0;
            score = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    std::size_t riskier = n;
                    if (t.time[i] != t.time[j]) {
                        const std::size_t early = t.time[i] < t.time[j] ? i : j;
                        if (t.event[early]) riskier = early;
                    } else if (t.event[i] != t.event[j]) {
                        riskier = t.event[i] ? i : j;
                    }
                    if (riskier == n) continue;
                    const std::size_t other = riskier == i ? j : i;
                    ++pairs;
                    if (t.risk[riskier] > t.risk[other])
                        score += 1.0;
                    else if (t.risk[riskier] == t.risk[other])
                        score += 0.5;
                }
            }
        } while (pairs == 0);
        const auto got = surv::concordance_index_pairs(t);
        if (got.n_pairs != pairs || got.c_index != score / static_cast<double>(pairs))
            return {false, "mismatch on table " + std::to_string(table)};
    }
    return {true, "exact match on 500 tables (n up to 50, ties and censoring mixed)"};
}

// --- 9. survival curves -------------------------------------------------------

Outcome check_km_logrank() {
    const std::vector<double> times{1, 2, 3, 4, 5, 6};
    const std::vector<std::uint8_t> events{1, 0, 1, 1, 0, 1};
    const auto lr = surv::logrank_test(times, events, times, events);
    const bool split_ok = lr.chi_square <= 1e-10 && lr.p_value >= 0.999;

    const auto curve = surv::kaplan_meier({1, 2, 2, 3, 4, 5}, {1, 0, 1, 1, 0, 1});
    const double want_s[] = {1.0, 5.0 / 6.0, 2.0 / 3.0, 4.0 / 9.0, 4.0 / 9.0, 0.0};
    const long want_r[] = {6, 6, 5, 3, 2, 1};
    const long want_d[] = {0, 1, 1, 1, 0, 1};
    bool curve_ok = curve.size() == 6;
    double curve_err = 0.0;
    for (std::size_t i = 0; curve_ok && i < curve.size(); ++i) {
        curve_err = std::max(curve_err, std::abs(curve[i].survival - want_s[i]));
        curve_ok = curve_ok && curve[i].at_risk == want_r[i] && curve[i].events == want_d[i];
    }
    curve_ok = curve_ok && curve_err <= 1e-15;
    return {split_ok && curve_ok, "duplicated-cohort stat=" + num(lr.chi_square) +
                                      " p=" + num(lr.p_value) +
                                      ", fixture curve error=" + num(curve_err)};
}

// --- 10. joint-assignment invariants ------------------------------------------

Outcome check_together_invariants() {
    testutil::Rng rng(1010);
    ot::SolverConfig cfg;
    cfg.max_iters = 500;
    double worst = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t k = rng.integer(2, 4), d = rng.integer(2, 5);
        const std::size_t n_p = rng.integer(2, 6), n_g = rng.integer(2, 6);

        Matrix logits(n_p, k);
        for (double& v : logits.data) v = rng.normal() * 2.0;
        const Matrix probs = together::softmax_rows(logits);
        for (std::size_t i = 0; i < probs.rows; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < k; ++j) row += probs(i, j);
            worst = std::max(worst, std::abs(row - 1.0));
        }

        Matrix shifted = logits;
        for (std::size_t i = 0; i < shifted.rows; ++i) {
            const double c = rng.uniform(-5.0, 5.0);
            for (std::size_t j = 0; j < k; ++j) shifted(i, j) += c;
        }
        worst = std::max(worst, testutil::max_abs_diff(
                                    together::transport_cost(logits).values,
                                    together::transport_cost(shifted).values));

        const Matrix cp = testutil::random_matrix(rng, n_p, k, 0.0, 3.0);
        const Matrix cg = testutil::random_matrix(rng, n_g, k, 0.0, 3.0);
        const auto joint = together::stack_costs({cp, false}, {cg, false});
        const auto [back_p, back_g] = together::split_plan(joint.values, n_p);
        if (std::memcmp(back_p.data.data(), cp.data.data(), cp.data.size() * 8) != 0 ||
            std::memcmp(back_g.data.data(), cg.data.data(), cg.data.size() * 8) != 0)
            return {false, "stack/split round trip broke on instance " + std::to_string(inst)};

        Matrix q(n_p, k);
        for (double& v : q.data) v = rng.uniform(0.0, 0.5);
        const auto w = together::fuse_weights(logits, q, 0.5);
        together::TokenMatrix x{Matrix(n_p, d), Modality::pathology, {}};
        together::TokenMatrix y = x;
        for (double& v : x.values.data) v = rng.normal();
        for (double& v : y.values.data) v = rng.normal();
        together::TokenMatrix sum = x;
        for (std::size_t i = 0; i < sum.values.data.size(); ++i)
            sum.values.data[i] += y.values.data[i];
        const Matrix hx = together::aggregate_prototypes(w, x);
        const Matrix hy = together::aggregate_prototypes(w, y);
        Matrix hsum = together::aggregate_prototypes(w, sum);
        for (std::size_t i = 0; i < hsum.data.size(); ++i)
            hsum.data[i] -= hx.data[i] + hy.data[i];
        for (double v : hsum.data) worst = std::max(worst, std::abs(v));

        // padded junk rows must leave every downstream byte untouched
        together::TokenMatrix padded{Matrix(n_p + 2, d), Modality::pathology,
                                     std::vector<std::uint8_t>(n_p + 2, 0)};
        padded.padded[0] = 1;
        padded.padded[n_p + 1] = 1;
        for (std::size_t i = 0; i < n_p; ++i)
            for (std::size_t j = 0; j < d; ++j) padded.values(i + 1, j) = x.values(i, j);
        for (std::size_t j = 0; j < d; ++j) {
            padded.values(0, j) = 1e9;
            padded.values(n_p + 1, j) = -7e8;
        }
        together::PrototypeBank bank{Matrix(k, d), 0.5};
        for (double& v : bank.values.data) v = rng.normal();
        Matrix proj(d, d, 0.0);
        for (std::size_t i = 0; i < d; ++i) proj(i, i) = 1.0;

        auto run = [&](const together::TokenMatrix& tokens) {
            const Matrix l = together::compact_rows(
                together::prototype_logits(tokens, proj, bank), tokens.padded);
            const auto cost = together::stack_costs(together::transport_cost(l), {cg, false});
            const auto res = ot::solve_uot_curriculum(cost, 0.7, cfg);
            const auto [qp, qg] = together::split_plan(
                together::rescale_plan(res.plan.values), l.rows);
            return together::fuse_weights(l, qp, 0.5).values;
        };
        const Matrix with_pad = run(padded);
        const Matrix without_pad = run(x);
        if (with_pad.rows != without_pad.rows ||
            std::memcmp(with_pad.data.data(), without_pad.data.data(),
                        with_pad.data.size() * 8) != 0)
            return {false, "padding changed the output on instance " + std::to_string(inst)};
    }
    return {worst <= 1e-12, "max invariant error=" + num(worst) + " over 100 instances"};
}

// --- 11. binary determinism ----------------------------------------------------

int spawn(const std::string& cmd) {
    const int rc = std::system((cmd + " >/dev/null").c_str());
    if (rc == -1) return -1;
#ifdef _WIN32
    return rc;
#else
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
#endif
}

io::json report_without_time(const std::string& path) {
    io::json j = io::json::parse(io::read_file(path));
    j.erase("wall_time_seconds");
    return j;
}

Outcome check_cli_determinism(const char* binary) {
    if (binary == nullptr) return {false, "binary path missing (expected as argv[1])"};
    const fs::path dir = "acceptance_scratch";
    fs::create_directories(dir);
    auto at = [&](const char* name) { return (dir / name).string(); };

    testutil::Rng rng(1111);
    io::write_matrix_csv(at("cost.csv"), testutil::random_matrix(rng, 5, 4, 0.0, 3.0));
    io::write_matrix_csv(at("xp.csv"), testutil::random_matrix(rng, 4, 3, -2.0, 2.0));
    io::write_matrix_csv(at("xg.csv"), testutil::random_matrix(rng, 3, 3, -2.0, 2.0));
    io::write_matrix_csv(at("proto.csv"), testutil::random_matrix(rng, 4, 3, -2.0, 2.0));

    const std::string bin(binary);
    const std::string solve_cmd = bin + " solve " + at("cost.csv") +
                                  " --mode curriculum --rho 0.6 --seed 42 --out " +
                                  at("plan.csv") + " --report " + at("solve.json");
    const std::string align_cmd =
        bin + " align " + at("xp.csv") + " " + at("xg.csv") + " " + at("proto.csv") +
        " --rho 0.8 --seed 42 --out-weights " + at("w.csv") + " --out-hp " + at("hp.csv") +
        " --out-hg " + at("hg.csv") + " --out-losses " + at("losses.json") + " --report " +
        at("align.json");
    const char* artifacts[] = {"plan.csv", "w.csv", "hp.csv", "hg.csv", "losses.json"};

    if (spawn(solve_cmd) != 0) return {false, "first solve run failed"};
    if (spawn(align_cmd) != 0) return {false, "first align run failed"};
    std::vector<std::string> first;
    for (const char* name : artifacts) first.push_back(io::read_file(at(name)));
    const std::string solve_report = report_without_time(at("solve.json")).dump();
    const std::string align_report = report_without_time(at("align.json")).dump();

    if (spawn(solve_cmd) != 0) return {false, "second solve run failed"};
    if (spawn(align_cmd) != 0) return {false, "second align run failed"};
    for (std::size_t i = 0; i < std::size(artifacts); ++i)
        if (io::read_file(at(artifacts[i])) != first[i])
            return {false, std::string(artifacts[i]) + " differs between runs"};
    if (report_without_time(at("solve.json")).dump() != solve_report ||
        report_without_time(at("align.json")).dump() != align_report)
        return {false, "reports differ beyond wall time"};
    return {true, "solve and align artifacts byte-identical across repeated runs"};
}

// --- 12. log-domain agreement ----------------------------------------------------

Outcome check_log_domain() {
    testutil::Rng rng(1212);
    double worst = 0.0;
    for (int inst = 0; inst < 20; ++inst) {
        const std::size_t n = rng.integer(2, 10), k = rng.integer(2, 6);
        const ot::CostMatrix cost{testutil::random_matrix(rng, n, k, 0.0, 3.0), false};
        const std::vector<double> a(n, 1.0 / static_cast<double>(n));
        const std::vector<double> b(k, 1.0 / static_cast<double>(k));
        ot::SolverConfig log_cfg;
        log_cfg.epsilon = inst % 2 == 0 ? 0.05 : rng.uniform(0.05, 1.0);
        ot::SolverConfig lin_cfg = log_cfg;
        log_cfg.log_domain = true;
        lin_cfg.log_domain = false;
        worst = std::max(worst, testutil::max_abs_diff(
                                    ot::solve_balanced(cost, a, b, log_cfg).values,
                                    ot::solve_balanced(cost, a, b, lin_cfg).values));
        worst = std::max(worst, testutil::max_abs_diff(
                                    ot::solve_uot_kl(cost, a, b, log_cfg).values,
                                    ot::solve_uot_kl(cost, a, b, lin_cfg).values));
        worst = std::max(worst, testutil::max_abs_diff(
                                    ot::solve_uot_curriculum(cost, 0.6, log_cfg).plan.values,
                                    ot::solve_uot_curriculum(cost, 0.6, lin_cfg).plan.values));
    }

    // at eps = 0.005 the kernel entries underflow to zero in direct mode; the
    // log path has to converge to a finite plan regardless
    bool stiff_ok = true;
    for (int inst = 0; inst < 5 && stiff_ok; ++inst) {
        const std::size_t n = rng.integer(3, 8), k = rng.integer(2, 5);
        const ot::CostMatrix cost{testutil::random_matrix(rng, n, k, 0.0, 3.0), false};
        ot::SolverConfig stiff;
        stiff.epsilon = 0.005;
        stiff.max_iters = 20000;
        stiff.log_domain = true;
        const auto res = ot::solve_uot_curriculum(cost, 0.7, stiff);
        stiff_ok = res.plan.converged && all_finite(res.plan.values);
        for (double v : res.plan.values.data) stiff_ok = stiff_ok && v >= 0.0;
    }
    const bool ok = worst <= 1e-8 && stiff_ok;
    return {ok, "max log/direct diff=" + num(worst) + " at eps>=0.05; stiff eps=0.005 " +
                    (stiff_ok ? "converged finite" : "FAILED")};
}

}  // namespace

int main(int argc, char** argv) {
#ifndef _WIN32
    unsetenv("CUROT_CONFIG");
#endif
    const char* binary = argc > 1 ? argv[1] : nullptr;
    struct Entry {
        const char* name;
        Outcome (*run)(const char*);
    };
    const Entry entries[] = {
        {"sink accounting", [](const char*) { return check_sink_accounting(); }},
        {"sampled-oracle equivalence", [](const char*) { return check_oracle_equivalence(); }},
        {"full-mass reduction", [](const char*) { return check_reduction_law(); }},
        {"balanced limit", [](const char*) { return check_balanced_limit(); }},
        {"proximal operator limits", [](const char*) { return check_prox_limits(); }},
        {"warm-up schedule", [](const char*) { return check_schedule(); }},
        {"gradient checks", [](const char*) { return check_gradients(); }},
        {"concordance oracle", [](const char*) { return check_cindex_oracle(); }},
        {"survival curves", [](const char*) { return check_km_logrank(); }},
        {"joint-assignment invariants", [](const char*) { return check_together_invariants(); }},
        {"binary determinism", [](const char* bin) { return check_cli_determinism(bin); }},
        {"log-domain agreement", [](const char*) { return check_log_domain(); }},
    };
    int failures = 0;
    for (std::size_t i = 0; i < std::size(entries); ++i) {
        Outcome out;
        try {
            out = entries[i].run(binary);
        } catch (const std::exception& e) {
            out = {false, std::string("unexpected exception: ") + e.what()};
        }
        failures += out.ok ? 0 : 1;
        std::printf("[%s] %2zu %s: %s\n", out.ok ? "PASS" : "FAIL", i + 1, entries[i].name,
                    out.detail.c_str());
    }
    if (failures == 0)
        std::printf("all 12 checks passed\n");
    else
        std::printf("%d of 12 checks FAILED\n", failures);
    return failures;
}
