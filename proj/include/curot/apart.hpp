#pragma once

#include <vector>

#include "curot/linalg.hpp"
#include "curot/modality.hpp"

namespace curot::apart {

// Pair of modality anchors plus the shared projection. Scores are cosine
// similarities in the projected space, divided by the temperature tau_r.
struct AnchorPair {
    std::vector<double> a_p;
    std::vector<double> a_g;
    Matrix phi;  // square, rows == cols == anchor length
    double tau_r = 0.1;
};

struct MeanToken {
    std::vector<double> hbar;
};

struct ScorePair {
    double s_plus = 0.0;
    double s_minus = 0.0;
};

struct ContrastiveGrads {
    double loss = 0.0;
    Matrix d_h_p;
    Matrix d_h_g;
    std::vector<double> d_a_p;
    std::vector<double> d_a_g;
};

// Arithmetic mean over the rows of a K x D' prototype matrix.
MeanToken mean_token(const Matrix& h);

// s_+ pairs the token with its own modality's anchor, s_- with the other's.
// Both the token and the anchors pass through phi and unit normalization
// first, so each score lies in [-1/tau_r, 1/tau_r].
ScorePair anchor_scores(const MeanToken& token, const AnchorPair& anchors, Modality own);

// Two-way InfoNCE over {s_+, s_-} per modality: softplus(s_- - s_+) summed
// over both modalities. Always positive; 2 log 2 at score symmetry.
double contrastive_loss(const ScorePair& scores_p, const ScorePair& scores_g);

// Loss plus closed-form gradients with respect to both prototype matrices
// and both anchors, chained through mean, projection, normalization, and
// the score softmax.
ContrastiveGrads contrastive_grad(const Matrix& h_p, const Matrix& h_g,
                                  const AnchorPair& anchors);

// Training objective: survival term plus weighted contrastive and instance
// terms.
double total_loss(double surv, double contrast, double instance,
                  double lambda_contrast = 0.5, double lambda_inst = 0.5);

}  // namespace curot::apart
