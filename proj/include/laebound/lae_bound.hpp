#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "laebound/common.hpp"
#include "laebound/interactions.hpp"
#include "laebound/numerics.hpp"

namespace laeb {

/// Second moments (sigma_xx, sigma_xy, sigma_yy) of the masked input/target
/// pair, with the spectral fields every bound component reuses.
struct CorrelationTriple {
    Matrix sigma_xx;
    Matrix sigma_xy;
    Matrix sigma_yy;

    Matrix sqrt_xx;                      // sigma_xx^{1/2}
    Matrix inv_sqrt_xx;                  // sigma_xx^{-1/2}
    SpectralDecomposition xx_spectrum;   // of sigma_xx
    Matrix b;                            // -sigma_xy^T sigma_xx^{-1/2}
    double c_log = 0.0;                  // tr(sigma_yy) - |b|_F^2
    double jitter_applied = 0.0;

    int n() const { return static_cast<int>(sigma_xx.rows()); }
};

// Populates the derived fields from raw moment matrices; applies jitter*I to
// sigma_xx only if the PD check fails and jitter is supplied.
CorrelationTriple make_correlation_triple(Matrix sigma_xx, Matrix sigma_xy,
                                          Matrix sigma_yy,
                                          std::optional<double> jitter = {});

CorrelationTriple correlations_from_holdout(const Matrix& sigma_hh, double p,
                                            std::optional<double> jitter = {});

double true_risk_closed(const CorrelationTriple& corr, const Matrix& w);

double emp_risk(const InteractionMatrix& x, const InteractionMatrix& y, const Matrix& w);
double emp_risk(const Matrix& x, const Matrix& y, const Matrix& w);

/// Entry-wise Gaussian prior N(u0_ij, sigma^2); zero_diag pins the diagonal
/// of W to exactly 0 (mean and variance both zero there).
struct GaussianPrior {
    Matrix u0;
    double sigma = 0.0;
    bool zero_diag = false;

    void validate() const;
};

/// Entry-wise Gaussian posterior. The optimal variance is row-independent:
/// S_ij = s_j for every row i (and S_ii = 0 under zero_diag).
struct GaussianPosterior {
    Matrix u;
    Vector s;  // per-column variance, length n
    bool zero_diag = false;

    // Column sums of the variance matrix: (n-1) s_j or n s_j.
    double variance_column_sum(Eigen::Index j) const {
        const double rows = static_cast<double>(s.size()) - (zero_diag ? 1.0 : 0.0);
        return rows * s(j);
    }
};

// Gram-form inputs for the posterior closed form; build once, reuse per lambda.
struct DesignGram {
    Matrix xxt;          // X X^T / 1 (unnormalized)
    Matrix yxt;          // Y X^T
    Vector x_row_norms;  // |X_{j*}|^2
    long long m = 0;
};

DesignGram design_gram(const InteractionMatrix& x, const InteractionMatrix& y);
DesignGram design_gram(const Matrix& x, const Matrix& y);

GaussianPosterior optimal_posterior(const DesignGram& gram, const GaussianPrior& prior,
                                    double lambda);
GaussianPosterior optimal_posterior(const InteractionMatrix& x, const InteractionMatrix& y,
                                    const GaussianPrior& prior, double lambda);
GaussianPosterior optimal_posterior(const Matrix& x, const Matrix& y,
                                    const GaussianPrior& prior, double lambda);

double kl_divergence(const GaussianPosterior& post, const GaussianPrior& prior);

double expected_emp_risk(const GaussianPosterior& post, const InteractionMatrix& x,
                         const InteractionMatrix& y);
double expected_emp_risk(const GaussianPosterior& post, const Matrix& x, const Matrix& y);

double expected_true_risk(const GaussianPosterior& post, const CorrelationTriple& corr);

struct LogMgf {
    double value = 0.0;
    // True under zero_diag: the unconstrained closed form upper-bounds the
    // constrained MGF, keeping the final bound valid.
    bool is_upper_bound = false;
};

LogMgf log_mgf_prior(const GaussianPrior& prior, const CorrelationTriple& corr,
                     double lambda);

// Largest admissible lambda for the prior's MGF: 1 / (2 sigma^2 eta_1(sigma_xx)).
double mgf_lambda_threshold(const GaussianPrior& prior, const CorrelationTriple& corr);

struct GridRecord {
    double lambda = 0.0;
    double emp_risk_exp = 0.0;
    double kl = 0.0;
    double log_mgf = 0.0;
    double ln_l_over_delta = 0.0;
    double lh = 0.0;  // E_rho[R_true]
    double rh = 0.0;
    bool mgf_is_upper_bound = false;
    std::optional<std::string> rejected;
};

struct BoundReport {
    std::vector<GridRecord> grid;
    std::size_t best_index = 0;  // minimal RH among non-rejected records
    double delta = 0.0;
    double sigma = 0.0;
    double p = 0.0;
    std::size_t l = 0;
    double jitter_applied = 0.0;
    bool zero_diag = true;
};

struct BoundConfig {
    double sigma = 0.001;
    double delta = 0.01;
    std::vector<double> lambda_grid = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512};
    bool zero_diag = true;
    std::optional<double> jitter;
};

BoundReport compute_bound(const Matrix& sigma_hh, double p, const InteractionMatrix& x,
                          const InteractionMatrix& y, const Matrix& w_model,
                          const BoundConfig& config);

// Same grid loop against a prebuilt correlation triple (used when the
// enumeration oracle supplies exact moments).
BoundReport compute_bound(const CorrelationTriple& corr, double p,
                          const InteractionMatrix& x, const InteractionMatrix& y,
                          const Matrix& w_model, const BoundConfig& config);

}  // namespace laeb
