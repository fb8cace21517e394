#include "laebound/mlr_bound.hpp"

#include <cmath>

namespace laeb {

ErrorMoments error_moments(const GaussianDataModel& model, const Matrix& w) {
    model.validate();
    if (w.rows() != model.p() || w.cols() != model.n()) {
        throw DimensionError("error_moments: W must match w_star's shape");
    }
    ErrorMoments out;
    const Matrix diff = model.w_star - w;
    out.mu_w = diff * model.mu_x;
    out.sigma_w = diff * model.sigma_x * diff.transpose() + model.sigma_e;
    out.sigma_w = 0.5 * (out.sigma_w + out.sigma_w.transpose()).eval();
    out.decomposition = sym_eig(out.sigma_w);
    out.b = out.decomposition.eigenvectors * psd_inv_sqrt(out.sigma_w) * out.mu_w;
    return out;
}

namespace {

double log_f_m(const ErrorMoments& em, double lambda, long long m) {
    const double md = static_cast<double>(m);
    double log_val = lambda * em.true_risk();
    for (Eigen::Index i = 0; i < em.b.size(); ++i) {
        const double eta = em.decomposition.eigenvalues(i);
        const double b2 = em.b(i) * em.b(i);
        log_val -= lambda * md * b2 * eta / (md + 2.0 * lambda * eta);
        log_val -= 0.5 * md * std::log1p(2.0 * lambda * eta / md);
    }
    return log_val;
}

void check_psi_args(const std::vector<Matrix>& prior_samples, double lambda, long long m) {
    if (!(lambda > 0.0)) throw ArgumentError("lambda must be positive");
    if (m < 1) throw ArgumentError("m must be >= 1");
    if (prior_samples.empty()) throw ArgumentError("prior sample set is empty");
}

}  // namespace

double psi_exact(const GaussianDataModel& model, const std::vector<Matrix>& prior_samples,
                 double lambda, long long m) {
    check_psi_args(prior_samples, lambda, m);
    std::vector<double> logs;
    logs.reserve(prior_samples.size());
    for (const Matrix& w : prior_samples) {
        logs.push_back(log_f_m(error_moments(model, w), lambda, m));
    }
    return log_mean_exp(logs);
}

double psi_upper(const GaussianDataModel& model, const std::vector<Matrix>& prior_samples,
                 double lambda, long long m) {
    check_psi_args(prior_samples, lambda, m);
    std::vector<double> logs;
    logs.reserve(prior_samples.size());
    for (const Matrix& w : prior_samples) {
        const ErrorMoments em = error_moments(model, w);
        logs.push_back(2.0 * lambda * lambda * em.sigma_w.squaredNorm() /
                       static_cast<double>(m));
    }
    return log_mean_exp(logs);
}

ConvergenceCheck convergence_condition_gaussian(const GaussianDataModel& model,
                                                const Matrix& u0, double sigma,
                                                double lambda) {
    model.validate();
    if (!(sigma > 0.0)) throw ArgumentError("sigma must be positive");
    if (!(lambda > 0.0)) throw ArgumentError("lambda must be positive");
    if (u0.rows() != model.p() || u0.cols() != model.n()) {
        throw DimensionError("convergence_condition_gaussian: u0 must match w_star's shape");
    }

    const Matrix second_moment = model.sigma_x + model.mu_x * model.mu_x.transpose();
    const SpectralDecomposition eig = sym_eig(second_moment);
    const double nu1 = eig.eigenvalues(0);

    ConvergenceCheck out;
    out.threshold = 1.0 / (2.0 * nu1 * sigma * sigma);
    out.holds = lambda < out.threshold;
    if (!out.holds) return out;

    // c_ij = Q_{j*} (W* - U0)_{i*}^T, i over the p rows, j over the n modes.
    const Matrix c = (model.w_star - u0) * eig.eigenvectors.transpose();
    double log_val = 0.0;
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
        const double nu = eig.eigenvalues(j);
        const double denom = 1.0 - 2.0 * lambda * sigma * sigma * nu;
        for (Eigen::Index i = 0; i < c.rows(); ++i) {
            log_val += lambda * nu * c(i, j) * c(i, j) / denom;
        }
        log_val -= 0.5 * static_cast<double>(c.rows()) * std::log(denom);
    }
    out.log_value = log_val;
    return out;
}

double alquier_rhs(double emp_risk, double kl, double delta, double psi, double lambda) {
    if (!(lambda > 0.0)) throw ArgumentError("lambda must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("delta must lie in (0, 1)");
    if (kl < 0.0) throw ArgumentError("KL divergence cannot be negative");
    return emp_risk + (kl + std::log(1.0 / delta) + psi) / lambda;
}

}  // namespace laeb
