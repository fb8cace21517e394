#pragma once

#include <optional>
#include <vector>

#include "laebound/common.hpp"
#include "laebound/numerics.hpp"
#include "laebound/synthetic.hpp"

namespace laeb {

/// Moments of the prediction error y - Wx under the Gaussian data model:
/// mu_w = (W* - W) mu_x, sigma_w = (W* - W) sigma_x (W* - W)^T + sigma_e.
struct ErrorMoments {
    Vector mu_w;
    Matrix sigma_w;
    SpectralDecomposition decomposition;  // of sigma_w
    Vector b;                             // S sigma_w^{-1/2} mu_w

    // tr(sigma_w) + mu_w^T mu_w
    double true_risk() const {
        return sigma_w.trace() + mu_w.squaredNorm();
    }
};

ErrorMoments error_moments(const GaussianDataModel& model, const Matrix& w);

// ln of the sample mean of the exact per-model integrand
//   f_m(W) = exp(lambda (tr sigma_w + mu_w^T mu_w))
//            * exp(sum_i -lambda m b_i^2 eta_i / (m + 2 lambda eta_i))
//            / prod_i (1 + 2 lambda eta_i / m)^{m/2}
// evaluated in log domain throughout. The average over the prior is
// sample-based; the integrand itself is exact per sample.
double psi_exact(const GaussianDataModel& model, const std::vector<Matrix>& prior_samples,
                 double lambda, long long m);

// Frobenius relaxation: log-mean-exp of 2 lambda^2 |sigma_w|_F^2 / m.
double psi_upper(const GaussianDataModel& model, const std::vector<Matrix>& prior_samples,
                 double lambda, long long m);

struct ConvergenceCheck {
    bool holds = false;
    double threshold = 0.0;  // 1 / (2 nu_1 sigma^2)
    // ln E_pi exp(lambda |(sigma_x + mu_x mu_x^T)^{1/2} (W* - W)^T|_F^2),
    // finite exactly when holds.
    std::optional<double> log_value;
};

// Entry-wise Gaussian prior N(u0_ij, sigma^2); closed-form finiteness check
// of the dominated-convergence condition.
ConvergenceCheck convergence_condition_gaussian(const GaussianDataModel& model,
                                                const Matrix& u0, double sigma,
                                                double lambda);

double alquier_rhs(double emp_risk, double kl, double delta, double psi, double lambda);

}  // namespace laeb
