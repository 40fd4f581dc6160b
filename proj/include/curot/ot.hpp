#pragma once

#include <optional>
#include <vector>

#include "curot/linalg.hpp"

namespace curot::ot {

// Nonnegative dense transport cost. When sink_augmented is set the last column
// is the zero-cost sink and must be identically zero.
struct CostMatrix {
    Matrix values;
    bool is_sink_augmented = false;
};

void validate(const CostMatrix& c);

struct Marginals {
    std::vector<double> a;  // source, strictly positive, sums to 1
    std::vector<double> b;  // target, nonnegative
};

struct TransportPlan {
    Matrix values;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;  // max violation of the hard (equality) marginals
};

struct SolverConfig {
    double epsilon = 0.05;  // entropic weight
    double gamma = 0.1;     // target-side KL weight
    double iota = 1e9;      // finite stand-in for the sink constraint weight
    int max_iters = 1000;
    double tol = 1e-9;      // threshold on the scaling-vector change
    bool log_domain = true;
};

void validate(const SolverConfig& cfg);

struct CurriculumSchedule {
    double rho_base = 0.1;
    double rho_upper = 1.0;
    long horizon = 1;
};

// How the sink column's constraint weight is realized: exact projection
// (the infinite-weight limit) or the finite iota from the config.
enum class SinkPolicy { hard_projection, finite_iota };

// Proximal maps under the KL geometry, restricted to the two kinds the
// solvers need. Carries enough data to run in either linear or log domain.
class Prox {
  public:
    enum class Kind { equality, weighted_kl };

    static Prox equality(std::vector<double> target);
    static Prox weighted_kl(std::vector<double> b, const std::vector<double>& gamma_vec,
                            double epsilon);

    std::size_t size() const { return target_.size(); }
    bool is_equality() const { return kind_ == Kind::equality; }
    const std::vector<double>& target() const { return target_; }

    // argmin_x  penalty(x) + epsilon*KL(x || y)
    std::vector<double> prox_value(const std::vector<double>& y) const;

    // The induced scaling-vector replacement: equality gives target/y,
    // weighted KL gives (b/y)^f. out is resized by the call.
    void scaling(const std::vector<double>& y, std::vector<double>& out) const;
    void scaling_log(const std::vector<double>& log_y, std::vector<double>& out) const;

  private:
    Kind kind_ = Kind::equality;
    std::vector<double> target_;
    std::vector<double> f_;           // exponents, weighted_kl only
    std::vector<double> log_target_;  // cached for the log path
};

// Free-function forms of the two proximal operators.
std::vector<double> prox_equality(const std::vector<double>& y, const std::vector<double>& a);
std::vector<double> prox_weighted_kl(const std::vector<double>& y, const std::vector<double>& b,
                                     const std::vector<double>& gamma_vec, double epsilon);

// Alternating diagonal scaling Q = diag(u)*exp(-C/eps)*diag(v) with prox-based
// updates of u and v. Convergence is declared when the scaling vector v moves
// by less than cfg.tol between iterations (log v in log-domain mode). The row
// scaling is refreshed once more after the loop so equality row constraints
// hold to float precision.
TransportPlan generalized_scaling(const CostMatrix& c, const Marginals& m, const Prox& prox_row,
                                  const Prox& prox_col, const SolverConfig& cfg);

// Equality constraints on both marginals.
TransportPlan solve_balanced(const CostMatrix& c, const std::vector<double>& a,
                             const std::vector<double>& b, const SolverConfig& cfg);

// Equality on rows, KL pull toward b (uniform 1/K when absent) on columns.
TransportPlan solve_uot_kl(const CostMatrix& c, const std::vector<double>& a,
                           const std::optional<std::vector<double>>& b, const SolverConfig& cfg);

struct CurriculumResult {
    TransportPlan plan;             // N x K, sink column removed
    std::vector<double> sink_mass;  // length N
};

// Augments c with a zero-cost sink column, targets [rho/K,...,rho/K, 1-rho],
// and scales with equality rows. Row sums of [plan | sink] equal 1/N; total
// plan mass is rho and total sink mass 1-rho up to solver tolerance.
CurriculumResult solve_uot_curriculum(const CostMatrix& c, double rho, const SolverConfig& cfg,
                                      SinkPolicy sink = SinkPolicy::hard_projection);

double rho_schedule(long t, const CurriculumSchedule& sched);

// Mass-constrained objective <Q,C> + gamma*KL(col_sums(Q) || rho/K * 1) with
// 0*log 0 = 0. The reference value the oracle minimizes.
double curriculum_objective(const Matrix& plan, const Matrix& c, double rho, double gamma);

struct OracleResult {
    Matrix best_plan;
    double best_objective = 0.0;
};

// Brute-force reference: random feasible plans (capped Dirichlet rows) plus
// coordinate-descent refinement of the best candidates. Independent of the
// scaling solvers; deterministic given seed. Desk scale only (N*K <= 64).
OracleResult oracle_uot_curriculum(const CostMatrix& c, double rho, double gamma, long samples,
                                   unsigned long long seed);

}  // namespace curot::ot
