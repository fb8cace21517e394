#include "laebound/lae_bound.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace laeb {

void GaussianPrior::validate() const {
    if (!(sigma > 0.0)) throw ArgumentError("prior sigma must be positive");
    if (zero_diag) {
        if (u0.rows() != u0.cols()) {
            throw DimensionError("zero-diagonal prior requires a square mean matrix");
        }
        if (u0.diagonal().cwiseAbs().maxCoeff() != 0.0) {
            throw ArgumentError("zero-diagonal prior requires diag(u0) = 0 exactly");
        }
    }
}

CorrelationTriple make_correlation_triple(Matrix sigma_xx, Matrix sigma_xy,
                                          Matrix sigma_yy, std::optional<double> jitter) {
    CorrelationTriple corr;
    corr.sigma_xx = std::move(sigma_xx);
    corr.sigma_xy = std::move(sigma_xy);
    corr.sigma_yy = std::move(sigma_yy);

    corr.xx_spectrum = sym_eig(corr.sigma_xx);
    const Eigen::Index n = corr.sigma_xx.rows();
    const double top = corr.xx_spectrum.eigenvalues(0);
    const double smallest = corr.xx_spectrum.eigenvalues(n - 1);
    if (smallest <= pd_tolerance(top)) {
        if (!jitter) {
            std::ostringstream msg;
            msg << "sigma_xx is numerically singular (smallest eigenvalue " << smallest
                << "); supply jitter to proceed";
            throw SingularMatrixError(msg.str(), smallest);
        }
        corr.sigma_xx.diagonal().array() += *jitter;
        corr.jitter_applied = *jitter;
        corr.xx_spectrum = sym_eig(corr.sigma_xx);
    }

    corr.sqrt_xx = psd_sqrt(corr.sigma_xx);
    corr.inv_sqrt_xx = psd_inv_sqrt(corr.sigma_xx);
    corr.b = -corr.sigma_xy.transpose() * corr.inv_sqrt_xx;
    corr.c_log = corr.sigma_yy.trace() - corr.b.squaredNorm();
    return corr;
}

CorrelationTriple correlations_from_holdout(const Matrix& sigma_hh, double p,
                                            std::optional<double> jitter) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw ArgumentError("retention fraction p must lie in (0, 1]");
    }
    if (sigma_hh.rows() != sigma_hh.cols()) {
        throw DimensionError("sigma_hh must be square");
    }
    const Vector diag = sigma_hh.diagonal();
    const double q = 1.0 - p;
    Matrix sigma_xx = p * p * sigma_hh;
    sigma_xx.diagonal() += p * q * diag;
    Matrix sigma_yy = q * q * sigma_hh;
    sigma_yy.diagonal() += p * q * diag;
    Matrix sigma_xy = p * q * sigma_hh;
    sigma_xy.diagonal().setZero();
    return make_correlation_triple(std::move(sigma_xx), std::move(sigma_xy),
                                   std::move(sigma_yy), jitter);
}

double true_risk_closed(const CorrelationTriple& corr, const Matrix& w) {
    if (w.rows() != corr.n() || w.cols() != corr.n()) {
        throw DimensionError("true_risk_closed: W must be n x n");
    }
    // |W sigma_xx^{1/2} - sigma_xy^T sigma_xx^{-1/2}|_F^2 + c_log
    return (w * corr.sqrt_xx + corr.b).squaredNorm() + corr.c_log;
}

double emp_risk(const InteractionMatrix& x, const InteractionMatrix& y, const Matrix& w) {
    if (x.n() != y.n() || x.m() != y.m()) {
        throw DimensionError("emp_risk: X and Y shapes differ");
    }
    if (w.rows() != w.cols() || w.rows() != x.n()) {
        throw DimensionError("emp_risk: W must be n x n");
    }
    const int n = x.n();
    Vector residual(n);
    double total = 0.0;
    for (int u = 0; u < x.m(); ++u) {
        residual.setZero();
        for (int i : x.items_of_user(u)) residual -= w.col(i);
        for (int i : y.items_of_user(u)) residual(i) += 1.0;
        total += residual.squaredNorm();
    }
    return total / static_cast<double>(x.m());
}

double emp_risk(const Matrix& x, const Matrix& y, const Matrix& w) {
    if (x.cols() != y.cols() || w.cols() != x.rows() || w.rows() != y.rows()) {
        throw DimensionError("emp_risk: inconsistent shapes");
    }
    return (y - w * x).squaredNorm() / static_cast<double>(x.cols());
}

DesignGram design_gram(const InteractionMatrix& x, const InteractionMatrix& y) {
    if (x.n() != y.n() || x.m() != y.m()) {
        throw DimensionError("design_gram: X and Y shapes differ");
    }
    const int n = x.n();
    DesignGram gram;
    gram.m = x.m();
    gram.xxt = Matrix::Zero(n, n);
    gram.yxt = Matrix::Zero(n, n);
    for (int u = 0; u < x.m(); ++u) {
        const auto& xi = x.items_of_user(u);
        const auto& yi = y.items_of_user(u);
        for (std::size_t a = 0; a < xi.size(); ++a) {
            for (std::size_t b = a; b < xi.size(); ++b) {
                gram.xxt(xi[a], xi[b]) += 1.0;
            }
            for (int iy : yi) gram.yxt(iy, xi[a]) += 1.0;
        }
    }
    gram.xxt = Matrix(gram.xxt.selfadjointView<Eigen::Upper>());
    gram.x_row_norms = gram.xxt.diagonal();
    return gram;
}

DesignGram design_gram(const Matrix& x, const Matrix& y) {
    if (x.cols() != y.cols()) throw DimensionError("design_gram: X and Y shapes differ");
    DesignGram gram;
    gram.m = x.cols();
    gram.xxt = x * x.transpose();
    gram.yxt = y * x.transpose();
    gram.x_row_norms = x.rowwise().squaredNorm();
    return gram;
}

GaussianPosterior optimal_posterior(const DesignGram& gram, const GaussianPrior& prior,
                                    double lambda) {
    prior.validate();
    if (!(lambda > 0.0)) throw ArgumentError("lambda must be positive");
    const Eigen::Index n = gram.xxt.rows();
    if (prior.u0.rows() != n || prior.u0.cols() != n) {
        throw DimensionError("optimal_posterior: prior mean must be n x n");
    }
    const double m = static_cast<double>(gram.m);
    const double ridge = 1.0 / (2.0 * lambda * prior.sigma * prior.sigma);

    Matrix k = gram.xxt / m;
    k.diagonal().array() += ridge;
    Eigen::LDLT<Matrix> ldlt(k);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
        throw NumericalError("optimal_posterior: X X^T / m + I/(2 lambda sigma^2) is not PD");
    }
    const Matrix k_inv = ldlt.solve(Matrix::Identity(n, n));
    const Matrix r = gram.yxt / m + ridge * prior.u0;

    GaussianPosterior post;
    post.zero_diag = prior.zero_diag;
    post.u = r * k_inv;
    if (prior.zero_diag) {
        // Lagrange correction keeping diag(U) = 0.
        const Vector x_mult =
            (2.0 * post.u.diagonal().array() / k_inv.diagonal().array()).matrix();
        post.u -= (0.5 * x_mult).asDiagonal() * k_inv;
        post.u.diagonal().setZero();  // exact, not just up to round-off
    }
    post.s = (2.0 * lambda / m * gram.x_row_norms.array() +
              1.0 / (prior.sigma * prior.sigma))
                 .inverse()
                 .matrix();
    return post;
}

GaussianPosterior optimal_posterior(const InteractionMatrix& x, const InteractionMatrix& y,
                                    const GaussianPrior& prior, double lambda) {
    return optimal_posterior(design_gram(x, y), prior, lambda);
}

GaussianPosterior optimal_posterior(const Matrix& x, const Matrix& y,
                                    const GaussianPrior& prior, double lambda) {
    return optimal_posterior(design_gram(x, y), prior, lambda);
}

double kl_divergence(const GaussianPosterior& post, const GaussianPrior& prior) {
    if (post.zero_diag != prior.zero_diag) {
        throw ArgumentError("kl_divergence: posterior and prior constraint flags differ");
    }
    prior.validate();
    const Eigen::Index n = post.s.size();
    if (post.u.rows() != n || post.u.cols() != n || prior.u0.rows() != n) {
        throw DimensionError("kl_divergence: inconsistent shapes");
    }
    if (post.s.minCoeff() <= 0.0) {
        throw ArgumentError("kl_divergence: posterior variances must be positive");
    }
    const double sigma2 = prior.sigma * prior.sigma;
    const double nd = static_cast<double>(n);
    const double rows_per_column = post.zero_diag ? nd - 1.0 : nd;
    const double entries = rows_per_column * nd;

    double variance_terms = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        variance_terms += rows_per_column * (std::log(post.s(j)) - post.s(j) / sigma2);
    }
    const double mean_term = (post.u - prior.u0).squaredNorm() / sigma2;
    return 0.5 * (entries * (2.0 * std::log(prior.sigma) - 1.0) - variance_terms + mean_term);
}

namespace {

double variance_risk_term(const GaussianPosterior& post, const Vector& row_weights) {
    double total = 0.0;
    for (Eigen::Index j = 0; j < post.s.size(); ++j) {
        total += post.variance_column_sum(j) * row_weights(j);
    }
    return total;
}

}  // namespace

double expected_emp_risk(const GaussianPosterior& post, const InteractionMatrix& x,
                         const InteractionMatrix& y) {
    const double mean_part = emp_risk(x, y, post.u);
    Vector row_norms = Vector::Zero(x.n());
    x.for_each_entry([&](int i, int) { row_norms(i) += 1.0; });
    return mean_part + variance_risk_term(post, row_norms) / static_cast<double>(x.m());
}

double expected_emp_risk(const GaussianPosterior& post, const Matrix& x, const Matrix& y) {
    const double mean_part = emp_risk(x, y, post.u);
    const Vector row_norms = x.rowwise().squaredNorm();
    return mean_part + variance_risk_term(post, row_norms) / static_cast<double>(x.cols());
}

double expected_true_risk(const GaussianPosterior& post, const CorrelationTriple& corr) {
    const double mean_part = true_risk_closed(corr, post.u);
    const Vector xx_diag = corr.sigma_xx.diagonal();
    return mean_part + variance_risk_term(post, xx_diag);
}

double mgf_lambda_threshold(const GaussianPrior& prior, const CorrelationTriple& corr) {
    const double eta1 = prior.sigma * prior.sigma * corr.xx_spectrum.eigenvalues(0);
    return 1.0 / (2.0 * eta1);
}

LogMgf log_mgf_prior(const GaussianPrior& prior, const CorrelationTriple& corr,
                     double lambda) {
    prior.validate();
    if (prior.u0.rows() != corr.n() || prior.u0.cols() != corr.n()) {
        throw DimensionError("log_mgf_prior: prior mean must be n x n");
    }
    if (!(lambda > 0.0)) throw ArgumentError("lambda must be positive");
    const double threshold = mgf_lambda_threshold(prior, corr);
    if (lambda >= threshold) {
        std::ostringstream msg;
        msg << "lambda " << lambda << " is outside the MGF domain (needs < " << threshold
            << ")";
        throw MgfDomainError(msg.str(), threshold);
    }

    // Rows of mu hold the per-row means mu^i; T = mu S^T gives
    // t_ij = S_{j*} mu^i, and t_ij^2 = (b-bar^i_j)^2 eta_j without dividing
    // by any eigenvalue.
    const double sigma2 = prior.sigma * prior.sigma;
    const Matrix mu = prior.u0 * corr.sqrt_xx + corr.b;
    const Matrix t = mu * corr.xx_spectrum.eigenvectors.transpose();

    double value = lambda * corr.c_log;
    const Eigen::Index n = corr.n();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double eta = sigma2 * corr.xx_spectrum.eigenvalues(j);
        const double denom = 1.0 - 2.0 * lambda * eta;
        value += lambda * t.col(j).squaredNorm() / denom;
        value -= 0.5 * static_cast<double>(n) * std::log(denom);
    }
    return {value, prior.zero_diag};
}

BoundReport compute_bound(const CorrelationTriple& corr, double p,
                          const InteractionMatrix& x, const InteractionMatrix& y,
                          const Matrix& w_model, const BoundConfig& config) {
    if (!(config.delta > 0.0 && config.delta < 1.0)) {
        throw ArgumentError("delta must lie in (0, 1)");
    }
    if (config.lambda_grid.empty()) throw ArgumentError("lambda grid is empty");
    for (std::size_t i = 0; i < config.lambda_grid.size(); ++i) {
        if (!(config.lambda_grid[i] > 0.0)) throw ArgumentError("lambda grid must be positive");
        for (std::size_t j = i + 1; j < config.lambda_grid.size(); ++j) {
            if (config.lambda_grid[i] == config.lambda_grid[j]) {
                throw ArgumentError("lambda grid entries must be distinct");
            }
        }
    }
    if (config.zero_diag && w_model.diagonal().cwiseAbs().maxCoeff() != 0.0) {
        throw ArgumentError("zero-diagonal mode requires diag(W) = 0 exactly");
    }

    GaussianPrior prior{w_model, config.sigma, config.zero_diag};
    const DesignGram gram = design_gram(x, y);

    BoundReport report;
    report.delta = config.delta;
    report.sigma = config.sigma;
    report.p = p;
    report.l = config.lambda_grid.size();
    report.jitter_applied = corr.jitter_applied;
    report.zero_diag = config.zero_diag;

    // The union bound is over the declared grid, so rejected lambdas still
    // count toward L.
    const double ln_l_over_delta =
        std::log(static_cast<double>(report.l) / config.delta);

    bool any_feasible = false;
    double best_rh = std::numeric_limits<double>::infinity();
    double threshold = std::numeric_limits<double>::quiet_NaN();
    for (double lambda : config.lambda_grid) {
        GridRecord rec;
        rec.lambda = lambda;
        rec.ln_l_over_delta = ln_l_over_delta;
        try {
            const LogMgf mgf = log_mgf_prior(prior, corr, lambda);
            const GaussianPosterior post = optimal_posterior(gram, prior, lambda);
            rec.emp_risk_exp = expected_emp_risk(post, x, y);
            rec.kl = kl_divergence(post, prior);
            rec.log_mgf = mgf.value;
            rec.mgf_is_upper_bound = mgf.is_upper_bound;
            rec.lh = expected_true_risk(post, corr);
            rec.rh = rec.emp_risk_exp + (rec.kl + ln_l_over_delta + rec.log_mgf) / lambda;
            if (!any_feasible || rec.rh < best_rh) {
                best_rh = rec.rh;
                report.best_index = report.grid.size();
            }
            any_feasible = true;
        } catch (const MgfDomainError& err) {
            rec.rejected = err.what();
            threshold = err.threshold;
        }
        report.grid.push_back(std::move(rec));
    }
    if (!any_feasible) {
        std::ostringstream msg;
        msg << "every lambda in the grid exceeds the MGF domain threshold " << threshold;
        throw MgfDomainError(msg.str(), threshold);
    }
    return report;
}

BoundReport compute_bound(const Matrix& sigma_hh, double p, const InteractionMatrix& x,
                          const InteractionMatrix& y, const Matrix& w_model,
                          const BoundConfig& config) {
    if (!(p > 0.0 && p < 1.0)) throw ArgumentError("retention fraction p must lie in (0, 1)");
    const CorrelationTriple corr = correlations_from_holdout(sigma_hh, p, config.jitter);
    return compute_bound(corr, p, x, y, w_model, config);
}

}  // namespace laeb
