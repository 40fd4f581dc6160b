#include "curot/together.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace curot::together {

namespace {

bool is_padded(const std::vector<std::uint8_t>& mask, std::size_t i) {
    return !mask.empty() && mask[i] != 0;
}

void validate(const TokenMatrix& x, const char* what) {
    if (x.values.rows == 0)
        throw std::invalid_argument(std::string(what) +
                                    ": token matrix needs at least one row");
    if (!all_finite(x.values))
        throw std::invalid_argument(std::string(what) +
                                    ": token matrix has non-finite entries");
    if (!x.padded.empty() && x.padded.size() != x.values.rows)
        throw std::invalid_argument(std::string(what) +
                                    ": padding mask length does not match the rows");
}

void validate(const PrototypeBank& bank, const char* what) {
    if (bank.values.rows < 2)
        throw std::invalid_argument(std::string(what) + ": need at least two prototypes");
    if (!all_finite(bank.values))
        throw std::invalid_argument(std::string(what) +
                                    ": prototype bank has non-finite entries");
    if (!std::isfinite(bank.tau) || bank.tau <= 0.0)
        throw std::invalid_argument(std::string(what) + ": tau must be positive");
}

double row_norm(const Matrix& m, std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * m(i, j);
    return std::sqrt(s);
}

}  // namespace

std::vector<std::vector<double>> pathway_select(const std::vector<double>& x_g,
                                                const PathwayMask& mask) {
    const Matrix& m = mask.membership;
    if (m.rows == 0)
        throw std::invalid_argument("pathway_select: mask has no pathways");
    if (m.cols != x_g.size())
        throw std::invalid_argument("pathway_select: gene count does not match the mask");
    std::vector<std::vector<double>> out(m.rows);
    for (std::size_t c = 0; c < m.rows; ++c) {
        for (std::size_t g = 0; g < m.cols; ++g) {
            const double v = m(c, g);
            if (v != 0.0 && v != 1.0)
                throw std::invalid_argument("pathway_select: mask entries must be 0 or 1");
            if (v == 1.0) out[c].push_back(x_g[g]);
        }
        if (out[c].empty())
            throw std::invalid_argument("pathway_select: pathway row " + std::to_string(c) +
                                        " selects no genes");
    }
    return out;
}

Matrix prototype_logits(const TokenMatrix& x, const Matrix& projection,
                        const PrototypeBank& bank) {
    validate(x, "prototype_logits");
    validate(bank, "prototype_logits");
    if (!all_finite(projection))
        throw std::invalid_argument("prototype_logits: projection has non-finite entries");
    if (projection.rows != x.values.cols || projection.cols != bank.values.cols)
        throw std::invalid_argument(
            "prototype_logits: projection must map token rows onto the prototype space");

    Matrix pn = bank.values;
    for (std::size_t k = 0; k < pn.rows; ++k) {
        const double n = row_norm(pn, k);
        if (n == 0.0)
            throw std::invalid_argument("prototype_logits: prototype row " +
                                        std::to_string(k) + " has zero norm");
        for (std::size_t j = 0; j < pn.cols; ++j) pn(k, j) /= n;
    }

    const Matrix projected = matmul(x.values, projection);
    Matrix logits(x.values.rows, pn.rows, 0.0);
    for (std::size_t i = 0; i < projected.rows; ++i) {
        if (is_padded(x.padded, i)) continue;  // stays a zero row
        const double n = row_norm(projected, i);
        if (n == 0.0)
            throw std::invalid_argument("prototype_logits: token row " + std::to_string(i) +
                                        " has zero norm after projection");
        for (std::size_t k = 0; k < pn.rows; ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < pn.cols; ++j) s += projected(i, j) * pn(k, j);
            logits(i, k) = s / (n * bank.tau);
        }
    }
    return logits;
}

ot::CostMatrix transport_cost(const Matrix& logits) {
    if (logits.rows == 0 || logits.cols == 0)
        throw std::invalid_argument("transport_cost: logits matrix is empty");
    if (!all_finite(logits))
        throw std::invalid_argument("transport_cost: logits must be finite");
    Matrix c(logits.rows, logits.cols);
    for (std::size_t i = 0; i < logits.rows; ++i) {
        const double lse = logsumexp(&logits.data[i * logits.cols], logits.cols);
        for (std::size_t j = 0; j < logits.cols; ++j) c(i, j) = lse - logits(i, j);
    }
    return {std::move(c), false};
}

Matrix compact_rows(const Matrix& m, const std::vector<std::uint8_t>& padded) {
    if (padded.empty()) return m;
    if (padded.size() != m.rows)
        throw std::invalid_argument("compact_rows: mask length does not match the rows");
    std::size_t kept = 0;
    for (auto p : padded) kept += p == 0;
    Matrix out(kept, m.cols);
    std::size_t r = 0;
    for (std::size_t i = 0; i < m.rows; ++i) {
        if (padded[i]) continue;
        for (std::size_t j = 0; j < m.cols; ++j) out(r, j) = m(i, j);
        ++r;
    }
    return out;
}

ot::CostMatrix stack_costs(const ot::CostMatrix& cost_p, const ot::CostMatrix& cost_g,
                           const std::vector<std::uint8_t>& padded_p,
                           const std::vector<std::uint8_t>& padded_g) {
    if (cost_p.is_sink_augmented || cost_g.is_sink_augmented)
        throw std::invalid_argument("stack_costs: inputs must not be sink-augmented");
    if (cost_p.values.cols != cost_g.values.cols)
        throw std::invalid_argument("stack_costs: prototype counts disagree");
    const Matrix top = compact_rows(cost_p.values, padded_p);
    const Matrix bottom = compact_rows(cost_g.values, padded_g);
    if (top.rows + bottom.rows == 0)
        throw std::invalid_argument("stack_costs: every row is padded");
    Matrix joint(top.rows + bottom.rows, cost_p.values.cols);
    for (std::size_t i = 0; i < top.rows; ++i)
        for (std::size_t j = 0; j < joint.cols; ++j) joint(i, j) = top(i, j);
    for (std::size_t i = 0; i < bottom.rows; ++i)
        for (std::size_t j = 0; j < joint.cols; ++j) joint(top.rows + i, j) = bottom(i, j);
    return {std::move(joint), false};
}

std::pair<Matrix, Matrix> split_plan(const Matrix& q, std::size_t n_p) {
    if (n_p > q.rows)
        throw std::invalid_argument("split_plan: n_p exceeds the plan's rows");
    Matrix qp(n_p, q.cols), qg(q.rows - n_p, q.cols);
    for (std::size_t i = 0; i < n_p; ++i)
        for (std::size_t j = 0; j < q.cols; ++j) qp(i, j) = q(i, j);
    for (std::size_t i = n_p; i < q.rows; ++i)
        for (std::size_t j = 0; j < q.cols; ++j) qg(i - n_p, j) = q(i, j);
    return {std::move(qp), std::move(qg)};
}

Matrix softmax_rows(const Matrix& logits) {
    if (!all_finite(logits))
        throw std::invalid_argument("softmax_rows: logits must be finite");
    Matrix s(logits.rows, logits.cols);
    for (std::size_t i = 0; i < logits.rows; ++i) {
        const double lse = logsumexp(&logits.data[i * logits.cols], logits.cols);
        for (std::size_t j = 0; j < logits.cols; ++j) s(i, j) = std::exp(logits(i, j) - lse);
    }
    return s;
}

Matrix rescale_plan(const Matrix& plan) {
    if (plan.rows == 0)
        throw std::invalid_argument("rescale_plan: plan has no rows");
    Matrix out = plan;
    const double n = static_cast<double>(plan.rows);
    for (double& v : out.data) v *= n;
    return out;
}

FusionWeights fuse_weights(const Matrix& logits, const Matrix& q_star, double beta) {
    if (!logits.same_shape(q_star))
        throw std::invalid_argument("fuse_weights: logits and plan shapes disagree");
    if (!std::isfinite(beta) || beta < 0.0 || beta > 1.0)
        throw std::invalid_argument("fuse_weights: beta must lie in [0, 1]");
    if (!all_finite(q_star))
        throw std::invalid_argument("fuse_weights: plan has non-finite entries");
    for (double v : q_star.data)
        if (v < 0.0)
            throw std::invalid_argument("fuse_weights: plan entries must be nonnegative");
    const Matrix s = softmax_rows(logits);
    FusionWeights w{Matrix(logits.rows, logits.cols), beta};
    for (std::size_t i = 0; i < s.data.size(); ++i)
        w.values.data[i] = (1.0 - beta) * s.data[i] + beta * q_star.data[i];
    return w;
}

Matrix aggregate_prototypes(const FusionWeights& w, const TokenMatrix& x) {
    validate(x, "aggregate_prototypes");
    const Matrix xc = compact_rows(x.values, x.padded);
    if (w.values.rows != xc.rows)
        throw std::invalid_argument(
            "aggregate_prototypes: weight rows do not match the unpadded tokens");
    return matmul(transpose(w.values), xc);
}

double instance_soft_ce(const Matrix& pi, const Matrix& logits) {
    if (!pi.same_shape(logits))
        throw std::invalid_argument("instance_soft_ce: shapes disagree");
    if (pi.rows == 0)
        throw std::invalid_argument("instance_soft_ce: no token rows");
    if (!all_finite(logits))
        throw std::invalid_argument("instance_soft_ce: logits must be finite");
    for (double v : pi.data)
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument(
                "instance_soft_ce: assignment rows must be nonnegative");
    double total = 0.0;
    for (std::size_t i = 0; i < pi.rows; ++i) {
        const double lse = logsumexp(&logits.data[i * logits.cols], logits.cols);
        for (std::size_t j = 0; j < pi.cols; ++j) {
            const double p = pi(i, j);
            if (p > 0.0) total += p * (logits(i, j) - lse);
        }
    }
    return -total / static_cast<double>(pi.rows);
}

double instance_loss(double ce_p, double ce_g, double lambda_wsi, double lambda_gen) {
    if (!(lambda_wsi >= 0.0) || !(lambda_gen >= 0.0))
        throw std::invalid_argument("instance_loss: modality weights must be nonnegative");
    return lambda_wsi * ce_p + lambda_gen * ce_g;
}

}  // namespace curot::together
