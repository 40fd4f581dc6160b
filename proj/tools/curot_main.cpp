#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "curot/io.hpp"
#include "curot/ot.hpp"
#include "curot/survival.hpp"
#include "curot/together.hpp"

namespace {

using curot::Matrix;
using curot::io::json;
using curot::io::RunConfig;
namespace io = curot::io;
namespace ot = curot::ot;
namespace surv = curot::surv;
namespace tog = curot::together;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

json input_entry(const std::string& path) {
    return json{{"path", path}, {"digest", io::file_digest(path)}};
}

void write_report(const std::string& path, json report, double seconds) {
    report["wall_time_seconds"] = seconds;
    io::atomic_write(path, report.dump(2) + "\n");
}

Matrix eye(std::size_t n) {
    Matrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

// Config flags shared by every subcommand; unset flags defer to the config
// file, which defers to the built-in defaults.
struct ConfigFlags {
    std::optional<std::string> config;
    std::optional<double> epsilon, gamma, iota, tol, tau, beta, rho, tau_r;
    std::optional<double> lambda_wsi, lambda_gen, lambda_contrast, lambda_inst;
    std::optional<long> max_iters;
    std::optional<bool> log_domain, rescale;
    std::optional<std::uint64_t> seed;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config, "JSON config file (default: $CUROT_CONFIG if set)");
        cmd->add_option("--epsilon", epsilon, "entropic regularization weight");
        cmd->add_option("--gamma", gamma, "target-side KL weight");
        cmd->add_option("--iota", iota, "finite stand-in for the sink constraint weight");
        cmd->add_option("--max-iters", max_iters, "scaling iteration cap");
        cmd->add_option("--tol", tol, "scaling convergence threshold");
        cmd->add_option("--log-domain", log_domain, "run the scaling in log space (true/false)");
        cmd->add_option("--tau", tau, "prototype logits temperature");
        cmd->add_option("--beta", beta, "softmax/plan mixing coefficient");
        cmd->add_option("--rho", rho, "transported mass fraction");
        cmd->add_option("--tau-r", tau_r, "contrastive temperature");
        cmd->add_option("--lambda-wsi", lambda_wsi, "pathology instance-CE weight");
        cmd->add_option("--lambda-gen", lambda_gen, "genomics instance-CE weight");
        cmd->add_option("--lambda-contrast", lambda_contrast, "contrastive term weight");
        cmd->add_option("--lambda-inst", lambda_inst, "instance term weight");
        cmd->add_option("--rescale-plan", rescale,
                        "rescale plan rows by token count before fusion (true/false)");
        cmd->add_option("--seed", seed, "seed recorded in the report");
    }

    RunConfig resolve() const {
        RunConfig c = io::load_run_config(config);
        if (epsilon) c.epsilon = *epsilon;
        if (gamma) c.gamma = *gamma;
        if (iota) c.iota = *iota;
        if (max_iters) c.max_iters = *max_iters;
        if (tol) c.tol = *tol;
        if (log_domain) c.log_domain = *log_domain;
        if (tau) c.tau = *tau;
        if (beta) c.beta = *beta;
        if (rho) c.rho = *rho;
        if (tau_r) c.tau_r = *tau_r;
        if (lambda_wsi) c.lambda_wsi = *lambda_wsi;
        if (lambda_gen) c.lambda_gen = *lambda_gen;
        if (lambda_contrast) c.lambda_contrast = *lambda_contrast;
        if (lambda_inst) c.lambda_inst = *lambda_inst;
        if (rescale) c.rescale_plan = *rescale;
        if (seed) c.seed = *seed;
        return c;
    }
};

struct SolveOpts {
    std::string cost_csv;
    std::string mode = "curriculum";
    std::string out_plan = "plan.csv";
    std::string report = "report.json";
    ConfigFlags flags;
};

int run_solve(const SolveOpts& o) {
    Timer timer;
    const RunConfig cfg = o.flags.resolve();
    const Matrix cost_values = io::read_matrix_csv(o.cost_csv);
    const ot::CostMatrix cost{cost_values, false};
    const ot::SolverConfig scfg = io::solver_part(cfg);

    Matrix out;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    bool sink_column = false;
    if (o.mode == "balanced") {
        const std::vector<double> a(cost_values.rows, 1.0 / static_cast<double>(cost_values.rows));
        const std::vector<double> b(cost_values.cols, 1.0 / static_cast<double>(cost_values.cols));
        auto plan = ot::solve_balanced(cost, a, b, scfg);
        out = std::move(plan.values);
        converged = plan.converged;
        iterations = plan.iterations;
        residual = plan.residual;
    } else if (o.mode == "uot") {
        const std::vector<double> a(cost_values.rows, 1.0 / static_cast<double>(cost_values.rows));
        auto plan = ot::solve_uot_kl(cost, a, std::nullopt, scfg);
        out = std::move(plan.values);
        converged = plan.converged;
        iterations = plan.iterations;
        residual = plan.residual;
    } else if (o.mode == "curriculum") {
        auto res = ot::solve_uot_curriculum(cost, cfg.rho, scfg);
        sink_column = true;
        out = Matrix(res.plan.values.rows, res.plan.values.cols + 1);
        for (std::size_t i = 0; i < out.rows; ++i) {
            for (std::size_t j = 0; j + 1 < out.cols; ++j) out(i, j) = res.plan.values(i, j);
            out(i, out.cols - 1) = res.sink_mass[i];
        }
        converged = res.plan.converged;
        iterations = res.plan.iterations;
        residual = res.plan.residual;
    } else {
        throw std::runtime_error("solve: unknown mode '" + o.mode +
                                 "' (expected balanced, uot, or curriculum)");
    }

    io::write_matrix_csv(o.out_plan, out);
    json report{{"command", "solve"},
                {"mode", o.mode},
                {"inputs", {{"cost", input_entry(o.cost_csv)}}},
                {"config", io::to_json(cfg)},
                {"outputs", {{"plan", o.out_plan}, {"report", o.report}}},
                {"plan_has_sink_column", sink_column},
                {"convergence",
                 {{"converged", converged}, {"iterations", iterations}, {"residual", residual}}}};
    write_report(o.report, std::move(report), timer.seconds());
    std::cout << "wrote " << o.out_plan << (converged ? " (converged after " : " (NOT converged, ")
              << iterations << " iterations)\n";
    return converged ? 0 : 2;
}

struct ScheduleOpts {
    double rho_base = 0.1;
    double rho_upper = 1.0;
    long horizon = 30;
    std::optional<long> steps;
    std::string out_csv = "schedule.csv";
    std::string report = "schedule_report.json";
    ConfigFlags flags;
};

int run_schedule(const ScheduleOpts& o) {
    Timer timer;
    const RunConfig cfg = o.flags.resolve();
    const long steps = o.steps.value_or(o.horizon);
    if (steps < 0) throw std::runtime_error("schedule: --steps must be nonnegative");
    const ot::CurriculumSchedule sched{o.rho_base, o.rho_upper, o.horizon};
    Matrix table(static_cast<std::size_t>(steps) + 1, 2);
    for (long t = 0; t <= steps; ++t) {
        table(static_cast<std::size_t>(t), 0) = static_cast<double>(t);
        table(static_cast<std::size_t>(t), 1) = ot::rho_schedule(t, sched);
    }
    io::write_matrix_csv(o.out_csv, table);
    json report{{"command", "schedule"},
                {"inputs", json::object()},
                {"config", io::to_json(cfg)},
                {"schedule",
                 {{"rho_base", o.rho_base},
                  {"rho_upper", o.rho_upper},
                  {"horizon", o.horizon},
                  {"steps", steps}}},
                {"outputs", {{"schedule", o.out_csv}, {"report", o.report}}}};
    write_report(o.report, std::move(report), timer.seconds());
    std::cout << "wrote " << o.out_csv << " (" << steps + 1 << " rows)\n";
    return 0;
}

struct AlignOpts {
    std::string tokens_p_csv;
    std::string tokens_g_csv;
    std::string prototypes_csv;
    std::optional<std::string> projection_p, projection_g, meta_p, meta_g;
    std::string out_weights = "w_final.csv";
    std::string out_hp = "h_p.csv";
    std::string out_hg = "h_g.csv";
    std::string out_losses = "losses.json";
    std::string report = "align_report.json";
    ConfigFlags flags;
};

tog::TokenMatrix load_tokens(const std::string& csv_path,
                             const std::optional<std::string>& meta_path,
                             curot::Modality slot, const char* slot_name) {
    tog::TokenMatrix t;
    t.values = io::read_matrix_csv(csv_path);
    t.modality = slot;
    if (!meta_path) return t;
    json m;
    try {
        m = json::parse(io::read_file(*meta_path));
    } catch (const json::parse_error& e) {
        throw std::runtime_error(*meta_path + ": " + e.what());
    }
    if (!m.is_object()) throw std::runtime_error(*meta_path + ": sidecar must be a JSON object");
    for (const auto& [key, value] : m.items()) {
        if (key == "modality") {
            if (!value.is_string() || value.get<std::string>() != slot_name)
                throw std::runtime_error(*meta_path + ": modality must be '" +
                                         std::string(slot_name) + "' for this argument");
        } else if (key == "n_tokens") {
            if (!value.is_number_integer() ||
                value.get<long>() != static_cast<long>(t.values.rows))
                throw std::runtime_error(*meta_path + ": n_tokens does not match " + csv_path);
        } else if (key == "padded_rows") {
            if (!value.is_array())
                throw std::runtime_error(*meta_path + ": padded_rows must be an array");
            t.padded.assign(t.values.rows, 0);
            for (const auto& idx : value) {
                if (!idx.is_number_integer() || idx.get<long>() < 0 ||
                    idx.get<long>() >= static_cast<long>(t.values.rows))
                    throw std::runtime_error(*meta_path + ": padded_rows index out of range");
                t.padded[static_cast<std::size_t>(idx.get<long>())] = 1;
            }
        } else {
            throw std::runtime_error(*meta_path + ": unknown sidecar key '" + key + "'");
        }
    }
    return t;
}

Matrix load_projection(const std::optional<std::string>& path, std::size_t token_dim,
                       std::size_t proto_dim, const char* which) {
    if (path) return io::read_matrix_csv(*path);
    if (token_dim != proto_dim)
        throw std::runtime_error(std::string("align: ") + which + " tokens have width " +
                                 std::to_string(token_dim) + " but prototypes have width " +
                                 std::to_string(proto_dim) +
                                 "; provide a projection matrix for this modality");
    return eye(token_dim);
}

int run_align(const AlignOpts& o) {
    Timer timer;
    const RunConfig cfg = o.flags.resolve();

    tog::TokenMatrix xp =
        load_tokens(o.tokens_p_csv, o.meta_p, curot::Modality::pathology, "pathology");
    tog::TokenMatrix xg =
        load_tokens(o.tokens_g_csv, o.meta_g, curot::Modality::genomics, "genomics");
    tog::PrototypeBank bank{io::read_matrix_csv(o.prototypes_csv), cfg.tau};

    const Matrix wp_proj =
        load_projection(o.projection_p, xp.values.cols, bank.values.cols, "pathology");
    const Matrix wg_proj =
        load_projection(o.projection_g, xg.values.cols, bank.values.cols, "genomics");

    const Matrix lp = tog::compact_rows(tog::prototype_logits(xp, wp_proj, bank), xp.padded);
    const Matrix lg = tog::compact_rows(tog::prototype_logits(xg, wg_proj, bank), xg.padded);
    const auto joint = tog::stack_costs(tog::transport_cost(lp), tog::transport_cost(lg));

    const auto res = ot::solve_uot_curriculum(joint, cfg.rho, io::solver_part(cfg));
    const Matrix scaled =
        cfg.rescale_plan ? tog::rescale_plan(res.plan.values) : res.plan.values;
    const auto [qp, qg] = tog::split_plan(scaled, lp.rows);

    const auto wfin_p = tog::fuse_weights(lp, qp, cfg.beta);
    const auto wfin_g = tog::fuse_weights(lg, qg, cfg.beta);

    const tog::TokenMatrix xpc{tog::compact_rows(xp.values, xp.padded), xp.modality, {}};
    const tog::TokenMatrix xgc{tog::compact_rows(xg.values, xg.padded), xg.modality, {}};
    const Matrix hp = tog::aggregate_prototypes(wfin_p, xpc);
    const Matrix hg = tog::aggregate_prototypes(wfin_g, xgc);

    const double ce_p = tog::instance_soft_ce(qp, lp);
    const double ce_g = tog::instance_soft_ce(qg, lg);
    const double inst = tog::instance_loss(ce_p, ce_g, cfg.lambda_wsi, cfg.lambda_gen);

    // re-check module invariants on the finished artifacts for the report
    double cost_softmax_err = 0.0;
    for (std::size_t i = 0; i < joint.values.rows; ++i) {
        double mass = 0.0;
        for (std::size_t j = 0; j < joint.values.cols; ++j)
            mass += std::exp(-joint.values(i, j));
        cost_softmax_err = std::max(cost_softmax_err, std::abs(mass - 1.0));
    }
    double fusion_row_err = 0.0;
    bool plan_nonneg = true;
    for (const auto* pair : {&wfin_p, &wfin_g}) {
        const Matrix& q = pair == &wfin_p ? qp : qg;
        for (std::size_t i = 0; i < pair->values.rows; ++i) {
            double row = 0.0, retained = 0.0;
            for (std::size_t j = 0; j < pair->values.cols; ++j) {
                row += pair->values(i, j);
                retained += q(i, j);
                plan_nonneg = plan_nonneg && q(i, j) >= 0.0;
            }
            const double expected = (1.0 - cfg.beta) + cfg.beta * retained;
            fusion_row_err = std::max(fusion_row_err, std::abs(row - expected));
        }
    }
    double sink_total = 0.0, plan_total = 0.0;
    for (double s : res.sink_mass) sink_total += s;
    for (double v : res.plan.values.data) plan_total += v;

    // stacked per-token weights, pathology rows first
    Matrix w_final(wfin_p.values.rows + wfin_g.values.rows, wfin_p.values.cols);
    for (std::size_t i = 0; i < wfin_p.values.rows; ++i)
        for (std::size_t j = 0; j < w_final.cols; ++j) w_final(i, j) = wfin_p.values(i, j);
    for (std::size_t i = 0; i < wfin_g.values.rows; ++i)
        for (std::size_t j = 0; j < w_final.cols; ++j)
            w_final(wfin_p.values.rows + i, j) = wfin_g.values(i, j);

    io::write_matrix_csv(o.out_weights, w_final);
    io::write_matrix_csv(o.out_hp, hp);
    io::write_matrix_csv(o.out_hg, hg);
    json losses{{"instance_ce_pathology", ce_p},
                {"instance_ce_genomics", ce_g},
                {"instance_loss", inst}};
    io::atomic_write(o.out_losses, losses.dump(2) + "\n");

    json inputs{{"tokens_p", input_entry(o.tokens_p_csv)},
                {"tokens_g", input_entry(o.tokens_g_csv)},
                {"prototypes", input_entry(o.prototypes_csv)}};
    if (o.projection_p) inputs["projection_p"] = input_entry(*o.projection_p);
    if (o.projection_g) inputs["projection_g"] = input_entry(*o.projection_g);
    if (o.meta_p) inputs["meta_p"] = input_entry(*o.meta_p);
    if (o.meta_g) inputs["meta_g"] = input_entry(*o.meta_g);

    json report{{"command", "align"},
                {"inputs", std::move(inputs)},
                {"config", io::to_json(cfg)},
                {"outputs",
                 {{"weights", o.out_weights},
                  {"h_p", o.out_hp},
                  {"h_g", o.out_hg},
                  {"losses", o.out_losses},
                  {"report", o.report}}},
                {"convergence",
                 {{"converged", res.plan.converged},
                  {"iterations", res.plan.iterations},
                  {"residual", res.plan.residual}}},
                {"invariants",
                 {{"cost_softmax_max_err", cost_softmax_err},
                  {"fusion_row_sum_max_err", fusion_row_err},
                  {"plan_nonnegative", plan_nonneg},
                  {"sink_mass_err", std::abs(sink_total - (1.0 - cfg.rho))},
                  {"plan_mass_err", std::abs(plan_total - cfg.rho)}}}};
    write_report(o.report, std::move(report), timer.seconds());
    std::cout << "wrote " << o.out_weights << ", " << o.out_hp << ", " << o.out_hg << ", "
              << o.out_losses << " (instance loss " << io::format_double(inst) << ")\n";
    return res.plan.converged ? 0 : 2;
}

struct KmOpts {
    std::string survival_csv;
    std::string split = "median";
    std::string ties = "low";
    std::string out_high = "km_high.csv";
    std::string out_low = "km_low.csv";
    std::string out_test = "logrank.json";
    std::string report = "km_report.json";
    ConfigFlags flags;
};

int run_km(const KmOpts& o) {
    Timer timer;
    const RunConfig cfg = o.flags.resolve();
    if (o.split != "median")
        throw std::runtime_error("km: unsupported --split '" + o.split +
                                 "' (only median is available)");
    const surv::MedianTies ties = [&] {
        if (o.ties == "low") return surv::MedianTies::to_low;
        if (o.ties == "high") return surv::MedianTies::to_high;
        throw std::runtime_error("km: --ties must be low or high");
    }();

    const surv::SurvivalTable table = io::read_survival_csv(o.survival_csv);
    const auto groups = surv::risk_stratify(table.risk, ties);
    auto subset = [&](const std::vector<std::size_t>& idx) {
        std::pair<std::vector<double>, std::vector<std::uint8_t>> out;
        for (std::size_t i : idx) {
            out.first.push_back(table.time[i]);
            out.second.push_back(table.event[i]);
        }
        return out;
    };
    const auto [high_t, high_e] = subset(groups.high);
    const auto [low_t, low_e] = subset(groups.low);

    io::write_km_csv(o.out_high, surv::kaplan_meier(high_t, high_e));
    io::write_km_csv(o.out_low, surv::kaplan_meier(low_t, low_e));
    const auto lr = surv::logrank_test(high_t, high_e, low_t, low_e);
    json test{{"chi_square", lr.chi_square}, {"p_value", lr.p_value}};
    io::atomic_write(o.out_test, test.dump(2) + "\n");

    json report{{"command", "km"},
                {"inputs", {{"survival", input_entry(o.survival_csv)}}},
                {"config", io::to_json(cfg)},
                {"split", {{"rule", o.split}, {"ties", o.ties}}},
                {"groups",
                 {{"high", groups.high.size()}, {"low", groups.low.size()}}},
                {"outputs",
                 {{"km_high", o.out_high},
                  {"km_low", o.out_low},
                  {"logrank", o.out_test},
                  {"report", o.report}}},
                {"logrank", test}};
    write_report(o.report, std::move(report), timer.seconds());
    std::cout << "chi_square=" << io::format_double(lr.chi_square)
              << " p_value=" << io::format_double(lr.p_value) << "\n";
    return 0;
}

struct CindexOpts {
    std::string survival_csv;
    std::string out_json = "cindex.json";
    std::string report = "cindex_report.json";
    ConfigFlags flags;
};

int run_cindex(const CindexOpts& o) {
    Timer timer;
    const RunConfig cfg = o.flags.resolve();
    const surv::SurvivalTable table = io::read_survival_csv(o.survival_csv);
    const auto r = surv::concordance_index_pairs(table);
    json result{{"c_index", r.c_index}, {"n_pairs", r.n_pairs}};
    io::atomic_write(o.out_json, result.dump(2) + "\n");
    json report{{"command", "cindex"},
                {"inputs", {{"survival", input_entry(o.survival_csv)}}},
                {"config", io::to_json(cfg)},
                {"outputs", {{"cindex", o.out_json}, {"report", o.report}}},
                {"result", result}};
    write_report(o.report, std::move(report), timer.seconds());
    std::cout << "c_index=" << io::format_double(r.c_index) << " n_pairs=" << r.n_pairs << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curriculum-transport multimodal toolkit"};
    app.require_subcommand(1);

    SolveOpts solve_opts;
    auto* solve_cmd = app.add_subcommand("solve", "Solve a transport problem from a cost CSV");
    solve_cmd->add_option("cost_csv", solve_opts.cost_csv, "headerless cost matrix CSV")
        ->required();
    solve_cmd->add_option("--mode", solve_opts.mode, "balanced, uot, or curriculum");
    solve_cmd->add_option("--out", solve_opts.out_plan, "plan CSV path");
    solve_cmd->add_option("--report", solve_opts.report, "report JSON path");
    solve_opts.flags.attach(solve_cmd);

    ScheduleOpts sched_opts;
    auto* sched_cmd = app.add_subcommand("schedule", "Tabulate the transported-mass schedule");
    sched_cmd->add_option("--rho-base", sched_opts.rho_base, "schedule start value");
    sched_cmd->add_option("--rho-upper", sched_opts.rho_upper, "schedule end value");
    sched_cmd->add_option("--horizon", sched_opts.horizon, "steps until the schedule saturates");
    sched_cmd->add_option("--steps", sched_opts.steps, "rows to emit (default: horizon)");
    sched_cmd->add_option("--out", sched_opts.out_csv, "schedule CSV path");
    sched_cmd->add_option("--report", sched_opts.report, "report JSON path");
    sched_opts.flags.attach(sched_cmd);

    AlignOpts align_opts;
    auto* align_cmd =
        app.add_subcommand("align", "Run the joint token-to-prototype assignment pipeline");
    align_cmd->add_option("tokens_p_csv", align_opts.tokens_p_csv, "pathology tokens CSV")
        ->required();
    align_cmd->add_option("tokens_g_csv", align_opts.tokens_g_csv, "genomics tokens CSV")
        ->required();
    align_cmd->add_option("prototypes_csv", align_opts.prototypes_csv, "prototype bank CSV")
        ->required();
    align_cmd->add_option("--projection-p", align_opts.projection_p,
                          "pathology projection CSV (default: identity)");
    align_cmd->add_option("--projection-g", align_opts.projection_g,
                          "genomics projection CSV (default: identity)");
    align_cmd->add_option("--meta-p", align_opts.meta_p,
                          "pathology sidecar JSON {modality,n_tokens,padded_rows}");
    align_cmd->add_option("--meta-g", align_opts.meta_g, "genomics sidecar JSON");
    align_cmd->add_option("--out-weights", align_opts.out_weights, "fused weights CSV");
    align_cmd->add_option("--out-hp", align_opts.out_hp, "pathology aggregate CSV");
    align_cmd->add_option("--out-hg", align_opts.out_hg, "genomics aggregate CSV");
    align_cmd->add_option("--out-losses", align_opts.out_losses, "losses JSON");
    align_cmd->add_option("--report", align_opts.report, "report JSON path");
    align_opts.flags.attach(align_cmd);

    KmOpts km_opts;
    auto* km_cmd = app.add_subcommand("km", "Stratify by risk and compare survival curves");
    km_cmd->add_option("survival_csv", km_opts.survival_csv, "survival table CSV")->required();
    km_cmd->add_option("--split", km_opts.split, "stratification rule (median)");
    km_cmd->add_option("--ties", km_opts.ties, "median ties go to: low or high");
    km_cmd->add_option("--out-high", km_opts.out_high, "high-risk curve CSV");
    km_cmd->add_option("--out-low", km_opts.out_low, "low-risk curve CSV");
    km_cmd->add_option("--out-test", km_opts.out_test, "log-rank JSON");
    km_cmd->add_option("--report", km_opts.report, "report JSON path");
    km_opts.flags.attach(km_cmd);

    CindexOpts ci_opts;
    auto* ci_cmd = app.add_subcommand("cindex", "Concordance index of a survival table");
    ci_cmd->add_option("survival_csv", ci_opts.survival_csv, "survival table CSV")->required();
    ci_cmd->add_option("--out", ci_opts.out_json, "result JSON path");
    ci_cmd->add_option("--report", ci_opts.report, "report JSON path");
    ci_opts.flags.attach(ci_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (solve_cmd->parsed()) return run_solve(solve_opts);
        if (sched_cmd->parsed()) return run_schedule(sched_opts);
        if (align_cmd->parsed()) return run_align(align_opts);
        if (km_cmd->parsed()) return run_km(km_opts);
        if (ci_cmd->parsed()) return run_cindex(ci_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
