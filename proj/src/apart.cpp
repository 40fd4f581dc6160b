#include "curot/apart.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace curot::apart {

namespace {

std::vector<double> matvec(const Matrix& m, const std::vector<double>& x) {
    std::vector<double> y(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) y[i] += m(i, j) * x[j];
    return y;
}

// Projection through phi followed by unit normalization. The pre-normalization
// norm is kept because the backward pass needs it.
struct Projected {
    std::vector<double> unit;
    double norm = 0.0;
};

Projected project(const Matrix& phi, const std::vector<double>& x, const char* what) {
    auto w = matvec(phi, x);
    const double n = norm2(w);
    if (!std::isfinite(n) || n == 0.0)
        throw std::invalid_argument(std::string(what) +
                                    ": projection produced a zero or non-finite vector");
    for (double& v : w) v /= n;
    return {std::move(w), n};
}

// d(unit)/dx pullback: through the normalization Jacobian (I - u u^T)/norm,
// then through phi^T.
std::vector<double> pull_back(const Matrix& phi, const Projected& pr,
                              const std::vector<double>& g_unit) {
    const double along = dot(pr.unit, g_unit);
    std::vector<double> gw(pr.unit.size());
    for (std::size_t i = 0; i < gw.size(); ++i)
        gw[i] = (g_unit[i] - pr.unit[i] * along) / pr.norm;
    std::vector<double> gx(phi.cols, 0.0);
    for (std::size_t i = 0; i < phi.rows; ++i)
        for (std::size_t j = 0; j < phi.cols; ++j) gx[j] += phi(i, j) * gw[i];
    return gx;
}

double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
    if (x > 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

void validate_pair(const AnchorPair& anchors, std::size_t token_dim, const char* what) {
    const std::size_t d = anchors.a_p.size();
    if (d == 0 || anchors.a_g.size() != d)
        throw std::invalid_argument(std::string(what) +
                                    ": anchors must be nonempty and equally long");
    if (anchors.phi.rows != d || anchors.phi.cols != d)
        throw std::invalid_argument(std::string(what) +
                                    ": phi must be square with the anchor dimension");
    if (token_dim != d)
        throw std::invalid_argument(std::string(what) +
                                    ": token length does not match the anchors");
    if (!std::isfinite(anchors.tau_r) || anchors.tau_r <= 0.0)
        throw std::invalid_argument(std::string(what) + ": tau_r must be positive");
}

}  // namespace

MeanToken mean_token(const Matrix& h) {
    if (h.rows == 0)
        throw std::invalid_argument("mean_token: matrix must have at least one row");
    std::vector<double> m(h.cols, 0.0);
    for (std::size_t i = 0; i < h.rows; ++i)
        for (std::size_t j = 0; j < h.cols; ++j) m[j] += h(i, j);
    for (double& v : m) v /= static_cast<double>(h.rows);
    return {std::move(m)};
}

ScorePair anchor_scores(const MeanToken& token, const AnchorPair& anchors, Modality own) {
    validate_pair(anchors, token.hbar.size(), "anchor_scores");
    const auto z = project(anchors.phi, token.hbar, "anchor_scores");
    const auto ap = project(anchors.phi, anchors.a_p, "anchor_scores");
    const auto ag = project(anchors.phi, anchors.a_g, "anchor_scores");
    const auto& own_a = own == Modality::pathology ? ap : ag;
    const auto& other_a = own == Modality::pathology ? ag : ap;
    return {dot(z.unit, own_a.unit) / anchors.tau_r,
            dot(z.unit, other_a.unit) / anchors.tau_r};
}

double contrastive_loss(const ScorePair& scores_p, const ScorePair& scores_g) {
    for (double s : {scores_p.s_plus, scores_p.s_minus, scores_g.s_plus, scores_g.s_minus})
        if (!std::isfinite(s))
            throw std::invalid_argument("contrastive_loss: scores must be finite");
    return softplus(scores_p.s_minus - scores_p.s_plus) +
           softplus(scores_g.s_minus - scores_g.s_plus);
}

ContrastiveGrads contrastive_grad(const Matrix& h_p, const Matrix& h_g,
                                  const AnchorPair& anchors) {
    const auto hbar_p = mean_token(h_p);
    const auto hbar_g = mean_token(h_g);
    validate_pair(anchors, hbar_p.hbar.size(), "contrastive_grad");
    if (h_g.cols != h_p.cols)
        throw std::invalid_argument("contrastive_grad: prototype matrices disagree on D'");

    const auto zp = project(anchors.phi, hbar_p.hbar, "contrastive_grad");
    const auto zg = project(anchors.phi, hbar_g.hbar, "contrastive_grad");
    const auto ap = project(anchors.phi, anchors.a_p, "contrastive_grad");
    const auto ag = project(anchors.phi, anchors.a_g, "contrastive_grad");
    const double tau = anchors.tau_r;
    const std::size_t d = hbar_p.hbar.size();

    const ScorePair sp{dot(zp.unit, ap.unit) / tau, dot(zp.unit, ag.unit) / tau};
    const ScorePair sg{dot(zg.unit, ag.unit) / tau, dot(zg.unit, ap.unit) / tau};

    ContrastiveGrads out;
    out.loss = contrastive_loss(sp, sg);

    // d loss / d s_- is the losing-branch softmax weight, d/d s_+ its negative
    const double wp = sigmoid(sp.s_minus - sp.s_plus);
    const double wg = sigmoid(sg.s_minus - sg.s_plus);

    std::vector<double> g_zp(d), g_zg(d), g_ap(d), g_ag(d);
    for (std::size_t i = 0; i < d; ++i) {
        g_zp[i] = wp * (ag.unit[i] - ap.unit[i]) / tau;
        g_zg[i] = wg * (ap.unit[i] - ag.unit[i]) / tau;
        g_ap[i] = (wg * zg.unit[i] - wp * zp.unit[i]) / tau;
        g_ag[i] = (wp * zp.unit[i] - wg * zg.unit[i]) / tau;
    }

    const auto g_hbar_p = pull_back(anchors.phi, zp, g_zp);
    const auto g_hbar_g = pull_back(anchors.phi, zg, g_zg);
    out.d_a_p = pull_back(anchors.phi, ap, g_ap);
    out.d_a_g = pull_back(anchors.phi, ag, g_ag);

    // the mean spreads the token gradient uniformly over the rows
    out.d_h_p = Matrix(h_p.rows, d);
    out.d_h_g = Matrix(h_g.rows, d);
    for (std::size_t i = 0; i < h_p.rows; ++i)
        for (std::size_t j = 0; j < d; ++j)
            out.d_h_p(i, j) = g_hbar_p[j] / static_cast<double>(h_p.rows);
    for (std::size_t i = 0; i < h_g.rows; ++i)
        for (std::size_t j = 0; j < d; ++j)
            out.d_h_g(i, j) = g_hbar_g[j] / static_cast<double>(h_g.rows);
    return out;
}

double total_loss(double surv, double contrast, double instance, double lambda_contrast,
                  double lambda_inst) {
    if (!(lambda_contrast >= 0.0) || !(lambda_inst >= 0.0))
        throw std::invalid_argument("total_loss: loss weights must be nonnegative");
    return surv + lambda_contrast * contrast + lambda_inst * instance;
}

}  // namespace curot::apart
