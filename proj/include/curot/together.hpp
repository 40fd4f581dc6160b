#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "curot/linalg.hpp"
#include "curot/modality.hpp"
#include "curot/ot.hpp"

namespace curot::together {

// Bag of token rows for one modality. `padded` (empty or one flag per row)
// marks rows that exist only to fill a fixed-size bag; padded rows are
// excluded from costs, fusion, aggregation, and loss averages.
struct TokenMatrix {
    Matrix values;  // N_m x D
    Modality modality = Modality::pathology;
    std::vector<std::uint8_t> padded;
};

// Shared prototypes compared against projected tokens by cosine similarity
// at temperature tau. Rows are unit-normalized internally at use.
struct PrototypeBank {
    Matrix values;  // K x D'
    double tau = 0.5;
};

// Mixture of similarity softmax and transport plan. Row i sums to
// (1 - beta) + beta * m_i where m_i is that token's retained transport mass.
struct FusionWeights {
    Matrix values;  // N_m x K
    double beta = 0.5;
};

// Binary pathway-by-gene membership; every pathway selects at least one gene.
struct PathwayMask {
    Matrix membership;  // C_g x N_g of {0,1}
};

// Dense subvectors of x_g per pathway, keeping gene order. Expression values
// that happen to be zero are kept; only mask-excluded positions are removed.
std::vector<std::vector<double>> pathway_select(const std::vector<double>& x_g,
                                                const PathwayMask& mask);

// L = (row-normalized X * projection) * (row-normalized P)^T / tau.
// Padded token rows come back as all-zero logit rows; zero-norm unpadded
// rows are an error naming the row.
Matrix prototype_logits(const TokenMatrix& x, const Matrix& projection,
                        const PrototypeBank& bank);

// C = -log(rowwise softmax(L)); every row of exp(-C) sums to one.
ot::CostMatrix transport_cost(const Matrix& logits);

// Vertical concatenation with pathology rows first; padded rows (per the
// optional masks) are dropped before stacking.
ot::CostMatrix stack_costs(const ot::CostMatrix& cost_p, const ot::CostMatrix& cost_g,
                           const std::vector<std::uint8_t>& padded_p = {},
                           const std::vector<std::uint8_t>& padded_g = {});

// Inverse of stack_costs on row partitions: first n_p rows and the rest.
std::pair<Matrix, Matrix> split_plan(const Matrix& q, std::size_t n_p);

// Rowwise softmax of a logits matrix.
Matrix softmax_rows(const Matrix& logits);

// Copy of m without the rows flagged in `padded` (empty mask: plain copy).
Matrix compact_rows(const Matrix& m, const std::vector<std::uint8_t>& padded);

// Scale a joint (pre-split) plan by its row count, lifting rows from the
// uniform 1/N source scale to per-token retained-mass fractions in [0,1].
Matrix rescale_plan(const Matrix& plan);

// W = (1-beta) * softmax(logits) + beta * q_star, elementwise. Both inputs
// must already be compacted to unpadded rows.
FusionWeights fuse_weights(const Matrix& logits, const Matrix& q_star, double beta);

// H = W^T X over unpadded token rows; K x D, linear in X.
Matrix aggregate_prototypes(const FusionWeights& w, const TokenMatrix& x);

// -(1/N) sum_i <pi_i, log softmax(logits)_i>. Rows of pi are nonnegative and
// may sum to less than one (mass removed with the sink).
double instance_soft_ce(const Matrix& pi, const Matrix& logits);

// lambda_wsi * ce_p + lambda_gen * ce_g.
double instance_loss(double ce_p, double ce_g, double lambda_wsi = 1.0,
                     double lambda_gen = 1.0);

}  // namespace curot::together
