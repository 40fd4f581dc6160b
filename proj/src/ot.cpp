#include "curot/ot.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace curot::ot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// max |a-b| where a matching pair of like-signed infinities counts as zero
// change (a column pinned at log v = -inf is stationary, not diverging).
double max_abs_change(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::isinf(a[i]) && std::isinf(b[i]) && std::signbit(a[i]) == std::signbit(b[i]))
            continue;
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

void check_positive_vector(const std::vector<double>& y, const char* where) {
    for (double x : y)
        if (!(x > 0.0) || !std::isfinite(x))
            throw std::invalid_argument(std::string(where) + ": y must be strictly positive");
}

void validate_source_marginal(const std::vector<double>& a, const char* where) {
    if (a.empty()) throw std::invalid_argument(std::string(where) + ": empty source marginal");
    double s = 0.0;
    for (double x : a) {
        if (!std::isfinite(x) || x <= 0.0)
            throw std::invalid_argument(std::string(where) +
                                        ": source marginal must be strictly positive");
        s += x;
    }
    if (std::abs(s - 1.0) > 1e-12)
        throw std::invalid_argument(std::string(where) + ": source marginal must sum to 1");
}

void validate_target_marginal(const std::vector<double>& b, const char* where) {
    if (b.empty()) throw std::invalid_argument(std::string(where) + ": empty target marginal");
    for (double x : b)
        if (!std::isfinite(x) || x < 0.0)
            throw std::invalid_argument(std::string(where) +
                                        ": target marginal must be nonnegative and finite");
}

}  // namespace

void validate(const CostMatrix& c) {
    if (c.values.rows == 0 || c.values.cols == 0)
        throw std::invalid_argument("CostMatrix: empty matrix");
    for (double x : c.values.data)
        if (!std::isfinite(x) || x < 0.0)
            throw std::invalid_argument("CostMatrix: entries must be finite and nonnegative");
    if (c.is_sink_augmented) {
        const std::size_t last = c.values.cols - 1;
        for (std::size_t i = 0; i < c.values.rows; ++i)
            if (c.values(i, last) != 0.0)
                throw std::invalid_argument("CostMatrix: sink column must be identically zero");
    }
}

void validate(const SolverConfig& cfg) {
    if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("SolverConfig: epsilon must be > 0");
    if (!(cfg.gamma > 0.0)) throw std::invalid_argument("SolverConfig: gamma must be > 0");
    if (!(cfg.iota >= 1e6 * cfg.gamma))
        throw std::invalid_argument("SolverConfig: iota must be at least 1e6 * gamma");
    if (cfg.max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be > 0");
}

Prox Prox::equality(std::vector<double> target) {
    if (target.empty()) throw std::invalid_argument("Prox::equality: empty target");
    for (double x : target)
        if (!std::isfinite(x) || x < 0.0)
            throw std::invalid_argument("Prox::equality: target must be nonnegative and finite");
    Prox p;
    p.kind_ = Kind::equality;
    p.log_target_.reserve(target.size());
    for (double x : target) p.log_target_.push_back(std::log(x));
    p.target_ = std::move(target);
    return p;
}

Prox Prox::weighted_kl(std::vector<double> b, const std::vector<double>& gamma_vec,
                       double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("Prox::weighted_kl: epsilon must be > 0");
    if (b.empty() || b.size() != gamma_vec.size())
        throw std::invalid_argument("Prox::weighted_kl: b and gamma_vec length mismatch");
    Prox p;
    p.kind_ = Kind::weighted_kl;
    p.f_.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (!std::isfinite(b[i]) || b[i] < 0.0)
            throw std::invalid_argument("Prox::weighted_kl: b must be nonnegative and finite");
        const double g = gamma_vec[i];
        if (std::isnan(g) || g < 0.0)
            throw std::invalid_argument("Prox::weighted_kl: gamma_vec must be nonnegative");
        p.f_[i] = std::isinf(g) ? 1.0 : g / (g + epsilon);
        if (b[i] == 0.0 && p.f_[i] == 0.0)
            throw std::invalid_argument(
                "Prox::weighted_kl: b=0 with zero constraint weight is undefined");
    }
    p.log_target_.reserve(b.size());
    for (double x : b) p.log_target_.push_back(std::log(x));
    p.target_ = std::move(b);
    return p;
}

std::vector<double> Prox::prox_value(const std::vector<double>& y) const {
    if (y.size() != target_.size())
        throw std::invalid_argument("Prox::prox_value: length mismatch");
    check_positive_vector(y, "Prox::prox_value");
    if (kind_ == Kind::equality) return target_;
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double f = f_[i];
        if (f == 0.0)
            out[i] = y[i];
        else if (f == 1.0)
            out[i] = target_[i];
        else if (target_[i] == 0.0)
            out[i] = 0.0;
        else
            out[i] = std::pow(target_[i], f) * std::pow(y[i], 1.0 - f);
    }
    return out;
}

void Prox::scaling(const std::vector<double>& y, std::vector<double>& out) const {
    out.resize(y.size());
    if (kind_ == Kind::equality) {
        for (std::size_t i = 0; i < y.size(); ++i) out[i] = target_[i] / y[i];
        return;
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double f = f_[i];
        if (f == 0.0)
            out[i] = 1.0;
        else if (target_[i] == 0.0)
            out[i] = 0.0;
        else
            out[i] = std::pow(target_[i] / y[i], f);
    }
}

void Prox::scaling_log(const std::vector<double>& log_y, std::vector<double>& out) const {
    out.resize(log_y.size());
    if (kind_ == Kind::equality) {
        for (std::size_t i = 0; i < log_y.size(); ++i) out[i] = log_target_[i] - log_y[i];
        return;
    }
    for (std::size_t i = 0; i < log_y.size(); ++i) {
        const double f = f_[i];
        if (f == 0.0)
            out[i] = 0.0;
        else if (target_[i] == 0.0)
            out[i] = -kInf;
        else
            out[i] = f * (log_target_[i] - log_y[i]);
    }
}

std::vector<double> prox_equality(const std::vector<double>& y, const std::vector<double>& a) {
    return Prox::equality(a).prox_value(y);
}

std::vector<double> prox_weighted_kl(const std::vector<double>& y, const std::vector<double>& b,
                                     const std::vector<double>& gamma_vec, double epsilon) {
    return Prox::weighted_kl(b, gamma_vec, epsilon).prox_value(y);
}

namespace {

[[noreturn]] void scaling_failure(int iteration) {
    throw std::runtime_error("generalized_scaling: non-finite scaling vector at iteration " +
                             std::to_string(iteration) +
                             " (epsilon too small for direct mode?)");
}

void check_scaling_finite(const std::vector<double>& u, const std::vector<double>& v, int it) {
    for (double x : u)
        if (!std::isfinite(x)) scaling_failure(it);
    for (double x : v)
        if (!std::isfinite(x)) scaling_failure(it);
}

// Log-domain vectors may legitimately hold -inf (zero-mass columns); NaN or
// +inf means the iteration blew up.
void check_log_scaling_sane(const std::vector<double>& lu, const std::vector<double>& lv, int it) {
    for (double x : lu)
        if (std::isnan(x) || x == kInf) scaling_failure(it);
    for (double x : lv)
        if (std::isnan(x) || x == kInf) scaling_failure(it);
}

double hard_residual(const Matrix& q, const Marginals& m, const Prox& pr, const Prox& pc) {
    double res = 0.0;
    if (pr.is_equality()) {
        const auto rs = row_sums(q);
        for (std::size_t i = 0; i < rs.size(); ++i)
            res = std::max(res, std::abs(rs[i] - m.a[i]));
    }
    if (pc.is_equality()) {
        const auto cs = col_sums(q);
        for (std::size_t j = 0; j < cs.size(); ++j)
            res = std::max(res, std::abs(cs[j] - m.b[j]));
    }
    return res;
}

TransportPlan scale_direct(const Matrix& c, const Marginals& m, const Prox& pr, const Prox& pc,
                           const SolverConfig& cfg) {
    const std::size_t n = c.rows, k = c.cols;
    Matrix g(n, k);
    for (std::size_t i = 0; i < n * k; ++i) g.data[i] = std::exp(-c.data[i] / cfg.epsilon);

    std::vector<double> u(n, 1.0), v(k, 1.0), x(n), y(k), v_new;
    TransportPlan plan;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < k; ++j) s += g(i, j) * v[j];
            x[i] = s;
        }
        pr.scaling(x, u);
        for (std::size_t j = 0; j < k; ++j) y[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < k; ++j) y[j] += g(i, j) * u[i];
        pc.scaling(y, v_new);
        const double delta = max_abs_change(v_new, v);
        v.swap(v_new);
        check_scaling_finite(u, v, it);
        plan.iterations = it;
        if (delta < cfg.tol) {
            plan.converged = true;
            break;
        }
    }
    // bind the hard row constraint against the final v
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += g(i, j) * v[j];
        x[i] = s;
    }
    pr.scaling(x, u);
    check_scaling_finite(u, v, plan.iterations);

    plan.values = Matrix(n, k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) plan.values(i, j) = u[i] * g(i, j) * v[j];
    plan.residual = hard_residual(plan.values, m, pr, pc);
    return plan;
}

TransportPlan scale_log(const Matrix& c, const Marginals& m, const Prox& pr, const Prox& pc,
                        const SolverConfig& cfg) {
    const std::size_t n = c.rows, k = c.cols;
    Matrix lg(n, k);  // log kernel -C/eps
    for (std::size_t i = 0; i < n * k; ++i) lg.data[i] = -c.data[i] / cfg.epsilon;

    std::vector<double> lu(n, 0.0), lv(k, 0.0), lx(n), ly(k), lv_new, row(k), col(n);
    TransportPlan plan;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < k; ++j) row[j] = lg(i, j) + lv[j];
            lx[i] = logsumexp(row.data(), k);
        }
        pr.scaling_log(lx, lu);
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t i = 0; i < n; ++i) col[i] = lg(i, j) + lu[i];
            ly[j] = logsumexp(col.data(), n);
        }
        pc.scaling_log(ly, lv_new);
        const double delta = max_abs_change(lv_new, lv);
        lv.swap(lv_new);
        check_log_scaling_sane(lu, lv, it);
        plan.iterations = it;
        if (delta < cfg.tol) {
            plan.converged = true;
            break;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) row[j] = lg(i, j) + lv[j];
        lx[i] = logsumexp(row.data(), k);
    }
    pr.scaling_log(lx, lu);
    check_log_scaling_sane(lu, lv, plan.iterations);

    plan.values = Matrix(n, k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) plan.values(i, j) = std::exp(lu[i] + lg(i, j) + lv[j]);
    plan.residual = hard_residual(plan.values, m, pr, pc);
    return plan;
}

}  // namespace

TransportPlan generalized_scaling(const CostMatrix& c, const Marginals& m, const Prox& prox_row,
                                  const Prox& prox_col, const SolverConfig& cfg) {
    validate(cfg);
    validate(c);
    const std::size_t n = c.values.rows, k = c.values.cols;
    if (m.a.size() != n || m.b.size() != k)
        throw std::invalid_argument("generalized_scaling: marginal lengths do not match cost");
    if (prox_row.size() != n || prox_col.size() != k)
        throw std::invalid_argument("generalized_scaling: prox sizes do not match cost");
    return cfg.log_domain ? scale_log(c.values, m, prox_row, prox_col, cfg)
                          : scale_direct(c.values, m, prox_row, prox_col, cfg);
}

TransportPlan solve_balanced(const CostMatrix& c, const std::vector<double>& a,
                             const std::vector<double>& b, const SolverConfig& cfg) {
    validate_source_marginal(a, "solve_balanced");
    validate_target_marginal(b, "solve_balanced");
    double bs = 0.0;
    for (double x : b) bs += x;
    if (std::abs(bs - 1.0) > 1e-12)
        throw std::invalid_argument("solve_balanced: target marginal must sum to 1");
    Marginals m{a, b};
    return generalized_scaling(c, m, Prox::equality(a), Prox::equality(b), cfg);
}

TransportPlan solve_uot_kl(const CostMatrix& c, const std::vector<double>& a,
                           const std::optional<std::vector<double>>& b, const SolverConfig& cfg) {
    validate(cfg);
    validate_source_marginal(a, "solve_uot_kl");
    const std::size_t k = c.values.cols;
    std::vector<double> bt = b ? *b : std::vector<double>(k, 1.0 / static_cast<double>(k));
    validate_target_marginal(bt, "solve_uot_kl");
    double bs = 0.0;
    for (double x : bt) bs += x;
    if (!(bs > 0.0)) throw std::invalid_argument("solve_uot_kl: target marginal must have mass");
    std::vector<double> gamma_vec(k, cfg.gamma);
    Marginals m{a, bt};
    return generalized_scaling(c, m, Prox::equality(a),
                               Prox::weighted_kl(bt, gamma_vec, cfg.epsilon), cfg);
}

CurriculumResult solve_uot_curriculum(const CostMatrix& c, double rho, const SolverConfig& cfg,
                                      SinkPolicy sink) {
    validate(cfg);
    validate(c);
    if (c.is_sink_augmented)
        throw std::invalid_argument("solve_uot_curriculum: cost is already sink-augmented");
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::invalid_argument("solve_uot_curriculum: rho must lie in [0,1]");
    const std::size_t n = c.values.rows, k = c.values.cols;

    CostMatrix aug;
    aug.values = Matrix(n, k + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) aug.values(i, j) = c.values(i, j);
    aug.is_sink_augmented = true;

    std::vector<double> a(n, 1.0 / static_cast<double>(n));
    std::vector<double> bt(k + 1, rho / static_cast<double>(k));
    bt[k] = 1.0 - rho;
    std::vector<double> gamma_vec(k + 1, cfg.gamma);
    gamma_vec[k] = sink == SinkPolicy::hard_projection ? kInf : cfg.iota;

    Marginals m{a, bt};
    TransportPlan full = generalized_scaling(aug, m, Prox::equality(a),
                                             Prox::weighted_kl(bt, gamma_vec, cfg.epsilon), cfg);

    CurriculumResult res;
    res.plan.converged = full.converged;
    res.plan.iterations = full.iterations;
    res.plan.residual = full.residual;
    res.plan.values = Matrix(n, k);
    res.sink_mass.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) res.plan.values(i, j) = full.values(i, j);
        res.sink_mass[i] = full.values(i, k);
    }
    return res;
}

double rho_schedule(long t, const CurriculumSchedule& sched) {
    if (!(sched.rho_base >= 0.0 && sched.rho_base <= sched.rho_upper && sched.rho_upper <= 1.0))
        throw std::invalid_argument("rho_schedule: need 0 <= rho_base <= rho_upper <= 1");
    if (sched.horizon < 1) throw std::invalid_argument("rho_schedule: horizon must be >= 1");
    if (t < 0) throw std::invalid_argument("rho_schedule: t must be >= 0");
    if (t >= sched.horizon) return sched.rho_upper;  // saturation, exact
    const double z = 1.0 - static_cast<double>(t) / static_cast<double>(sched.horizon);
    const double val = sched.rho_base + (sched.rho_upper - sched.rho_base) * std::exp(-5.0 * z * z);
    return std::clamp(val, 0.0, 1.0);
}

double curriculum_objective(const Matrix& plan, const Matrix& c, double rho, double gamma) {
    if (!plan.same_shape(c))
        throw std::invalid_argument("curriculum_objective: plan and cost shapes differ");
    double lin = 0.0;
    for (std::size_t i = 0; i < plan.data.size(); ++i) lin += plan.data[i] * c.data[i];
    const double q = rho / static_cast<double>(c.cols);
    double kl = 0.0;
    const auto p = col_sums(plan);
    for (double pj : p) {
        if (pj <= 0.0) continue;  // 0 log 0 = 0
        kl += q > 0.0 ? pj * std::log(pj / q) : kInf;
    }
    return lin + gamma * kl;
}

namespace {

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(unsigned long long seed) : eng(seed) {}
    // uniform in [0,1) pinned to the raw engine bits
    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    double exponential() { return -std::log1p(-uniform()); }
};

// Row totals: rho * Dirichlet(1..1) water-filled against the 1/N cap.
std::vector<double> sample_row_totals(std::size_t n, double rho, Rng& rng) {
    const double cap = 1.0 / static_cast<double>(n);
    std::vector<double> w(n);
    double ws = 0.0;
    for (auto& x : w) {
        x = rng.exponential();
        ws += x;
    }
    std::vector<double> s(n);
    if (ws <= 0.0) {
        for (auto& x : s) x = rho / static_cast<double>(n);
        return s;
    }
    for (std::size_t i = 0; i < n; ++i) s[i] = rho * w[i] / ws;
    for (int round = 0; round < 64; ++round) {
        double excess = 0.0, slack = 0.0;
        for (double x : s) {
            excess += std::max(0.0, x - cap);
            slack += std::max(0.0, cap - x);
        }
        if (excess <= 1e-15) break;
        for (auto& x : s) {
            const double room = cap - x;
            if (x > cap)
                x = cap;
            else if (room > 0.0 && slack > 0.0)
                x += excess * room / slack;
        }
    }
    // mop up any remaining drift so total mass is exact
    for (auto& x : s) x = std::min(x, cap);
    double total = 0.0;
    for (double x : s) total += x;
    double deficit = rho - total;
    for (std::size_t i = 0; i < n && std::abs(deficit) > 0.0; ++i) {
        const double room = deficit > 0.0 ? cap - s[i] : s[i];
        const double step = std::copysign(std::min(std::abs(deficit), room), deficit);
        s[i] += step;
        deficit -= step;
    }
    return s;
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// One coordinate-descent sweep; returns achieved improvement. Four move
// families: mass shifts between columns inside a row (closed-form optimum of
// the strictly convex 1-D restriction), mass shifts between rows inside a
// column (linear, so move to the boundary), 2x2 exchanges that leave all
// marginals fixed (linear), and diagonal relocations (i1,j1)->(i2,j2) that
// change both marginals (closed form again). The last two families unlock
// descent directions the first two cannot take alone when the composite
// move's halves are each uphill.
double refine_sweep(Matrix& plan, const Matrix& c, double gamma, double cap,
                    std::vector<double>& p, std::vector<double>& rsum) {
    const std::size_t n = plan.rows, k = plan.cols;
    double gained = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j1 = 0; j1 + 1 < k; ++j1) {
            for (std::size_t j2 = j1 + 1; j2 < k; ++j2) {
                const double q1 = plan(i, j1), q2 = plan(i, j2);
                if (q1 == 0.0 && q2 == 0.0) continue;
                // minimize over t: t*(C1-C2) + gamma*[xlogx(p1+t)+xlogx(p2-t)]
                const double expo = (c(i, j2) - c(i, j1)) / gamma;
                double t;
                if (expo > 700.0)
                    t = q2;
                else if (expo < -700.0)
                    t = -q1;
                else {
                    const double r = std::exp(expo);
                    t = (r * p[j2] - p[j1]) / (1.0 + r);
                    t = std::clamp(t, -q1, q2);
                }
                if (t == 0.0) continue;
                // the -log q cross terms cancel between the two columns
                const double delta = t * (c(i, j1) - c(i, j2)) +
                                     gamma * (xlogx(p[j1] + t) + xlogx(p[j2] - t) -
                                              xlogx(p[j1]) - xlogx(p[j2]));
                if (delta < -1e-15) {
                    plan(i, j1) = q1 + t;
                    plan(i, j2) = q2 - t;
                    p[j1] += t;
                    p[j2] -= t;
                    gained -= delta;
                }
            }
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            const double qi = plan(i1, j);
            if (qi <= 0.0) continue;
            for (std::size_t i2 = 0; i2 < n; ++i2) {
                if (i1 == i2) continue;
                const double drop = c(i1, j) - c(i2, j);
                if (drop <= 1e-15) continue;
                const double room = cap - rsum[i2];
                const double t = std::min(plan(i1, j), room);
                if (t <= 0.0) continue;
                plan(i1, j) -= t;
                plan(i2, j) += t;
                rsum[i1] -= t;
                rsum[i2] += t;
                gained += t * drop;
                if (plan(i1, j) <= 0.0) break;
            }
        }
    }
    for (std::size_t i1 = 0; i1 < n; ++i1) {
        for (std::size_t i2 = i1 + 1; i2 < n; ++i2) {
            for (std::size_t j1 = 0; j1 + 1 < k; ++j1) {
                for (std::size_t j2 = j1 + 1; j2 < k; ++j2) {
                    // t > 0 routes (i1,j1)->(i1,j2) and (i2,j2)->(i2,j1)
                    const double slope =
                        c(i1, j2) - c(i1, j1) + c(i2, j1) - c(i2, j2);
                    double t = 0.0;
                    if (slope < 0.0)
                        t = std::min(plan(i1, j1), plan(i2, j2));
                    else if (slope > 0.0)
                        t = -std::min(plan(i1, j2), plan(i2, j1));
                    const double delta = t * slope;
                    if (delta < -1e-15) {
                        plan(i1, j1) -= t;
                        plan(i1, j2) += t;
                        plan(i2, j2) -= t;
                        plan(i2, j1) += t;
                        gained -= delta;
                    }
                }
            }
        }
    }
    for (std::size_t i1 = 0; i1 < n; ++i1) {
        for (std::size_t j1 = 0; j1 < k; ++j1) {
            for (std::size_t i2 = 0; i2 < n; ++i2) {
                if (i2 == i1) continue;
                for (std::size_t j2 = 0; j2 < k; ++j2) {
                    if (j2 == j1) continue;
                    const double q1 = plan(i1, j1);
                    const double room = std::max(0.0, cap - rsum[i2]);
                    const double u_max = std::min(q1, room);
                    if (u_max <= 0.0) continue;
                    // minimize u*dc + gamma*[xlogx(p1-u)+xlogx(p2+u)] over
                    // u in [0, u_max]; same cancellation as the row family
                    const double expo = (c(i1, j1) - c(i2, j2)) / gamma;
                    double u;
                    if (expo > 700.0) {
                        u = u_max;
                    } else if (expo < -700.0) {
                        continue;
                    } else {
                        const double r = std::exp(expo);
                        u = (r * p[j1] - p[j2]) / (1.0 + r);
                        u = std::clamp(u, 0.0, u_max);
                    }
                    if (u == 0.0) continue;
                    const double dc = c(i2, j2) - c(i1, j1);
                    const double delta = u * dc + gamma * (xlogx(p[j1] - u) + xlogx(p[j2] + u) -
                                                           xlogx(p[j1]) - xlogx(p[j2]));
                    if (delta < -1e-15) {
                        plan(i1, j1) = q1 - u;
                        plan(i2, j2) += u;
                        p[j1] -= u;
                        p[j2] += u;
                        rsum[i1] -= u;
                        rsum[i2] += u;
                        gained -= delta;
                    }
                }
            }
        }
    }
    return gained;
}

void refine(Matrix& plan, const Matrix& c, double gamma, double cap) {
    for (int sweep = 0; sweep < 500; ++sweep) {
        auto p = col_sums(plan);
        auto rsum = row_sums(plan);
        if (refine_sweep(plan, c, gamma, cap, p, rsum) < 1e-13) break;
    }
}

}  // namespace

OracleResult oracle_uot_curriculum(const CostMatrix& c, double rho, double gamma, long samples,
                                   unsigned long long seed) {
    validate(c);
    if (c.is_sink_augmented)
        throw std::invalid_argument("oracle_uot_curriculum: cost must not be sink-augmented");
    const std::size_t n = c.values.rows, k = c.values.cols;
    if (n * k > 64) throw std::invalid_argument("oracle_uot_curriculum: instance too large");
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::invalid_argument("oracle_uot_curriculum: infeasible rho");
    if (!(gamma > 0.0)) throw std::invalid_argument("oracle_uot_curriculum: gamma must be > 0");
    if (samples < 0) throw std::invalid_argument("oracle_uot_curriculum: negative sample count");

    OracleResult res;
    res.best_plan = Matrix(n, k, 0.0);
    if (rho == 0.0) {
        res.best_objective = 0.0;  // empty plan is the whole feasible set
        return res;
    }

    const double cap = 1.0 / static_cast<double>(n);
    const Matrix& cost = c.values;

    std::vector<Matrix> starts;
    {
        // uniform spread
        Matrix m0(n, k, rho / static_cast<double>(n * k));
        starts.push_back(std::move(m0));
        // greedy: each row dumps its cap onto its cheapest column until rho is placed
        Matrix m1(n, k, 0.0);
        double remaining = rho;
        for (std::size_t i = 0; i < n && remaining > 0.0; ++i) {
            std::size_t jbest = 0;
            for (std::size_t j = 1; j < k; ++j)
                if (cost(i, j) < cost(i, jbest)) jbest = j;
            const double take = std::min(cap, remaining);
            m1(i, jbest) = take;
            remaining -= take;
        }
        starts.push_back(std::move(m1));
    }

    Rng rng(seed);
    Matrix cand(n, k);
    std::vector<double> split(k);
    double best_sampled = kInf;
    Matrix best_sampled_plan;
    for (long s = 0; s < samples; ++s) {
        const auto totals = sample_row_totals(n, rho, rng);
        for (std::size_t i = 0; i < n; ++i) {
            double ws = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                split[j] = rng.exponential();
                ws += split[j];
            }
            for (std::size_t j = 0; j < k; ++j)
                cand(i, j) = ws > 0.0 ? totals[i] * split[j] / ws
                                      : totals[i] / static_cast<double>(k);
        }
        const double obj = curriculum_objective(cand, cost, rho, gamma);
        if (obj < best_sampled) {
            best_sampled = obj;
            best_sampled_plan = cand;
        }
    }
    if (best_sampled < kInf) starts.push_back(std::move(best_sampled_plan));

    res.best_objective = kInf;
    for (auto& start : starts) {
        refine(start, cost, gamma, cap);
        const double obj = curriculum_objective(start, cost, rho, gamma);
        if (obj < res.best_objective) {
            res.best_objective = obj;
            res.best_plan = start;
        }
    }
    return res;
}

}  // namespace curot::ot
