#pragma once

#include <cstdint>
#include <vector>

#include "laebound/common.hpp"
#include "laebound/lae_bound.hpp"
#include "laebound/mlr_bound.hpp"
#include "laebound/synthetic.hpp"

namespace laeb {

struct EstimateWithError {
    double mean = 0.0;
    double stderr_ = 0.0;
    long long samples = 0;
};

// Monte Carlo estimate of E |y - Wx|^2 under the Gaussian regression model.
EstimateWithError mc_true_risk(const GaussianDataModel& model, const Matrix& w,
                               long long samples, std::uint64_t seed);

// Same under the LAE generator: h ~ M, entry-wise hold-out mask with
// retention p, x = delta .* h, y = (1 - delta) .* h.
EstimateWithError mc_true_risk(const BernoulliModel& model, double p, const Matrix& w,
                               long long samples, std::uint64_t seed);

/// Exhaustive enumeration of the (h, delta) outcome space: exact moment
/// matrices and an exact risk functional, independent of every closed form.
class LaeEnumeration {
  public:
    LaeEnumeration(const BernoulliModel& model, double p);

    const Matrix& sigma_xx() const { return sigma_xx_; }
    const Matrix& sigma_xy() const { return sigma_xy_; }
    const Matrix& sigma_yy() const { return sigma_yy_; }

    // Exact E |y - Wx|^2 by direct summation over all outcomes.
    double true_risk(const Matrix& w) const;

  private:
    struct Outcome {
        Vector x;
        Vector y;
        double weight;
    };
    int n_ = 0;
    Matrix sigma_xx_, sigma_xy_, sigma_yy_;
    std::vector<Outcome> outcomes_;
};

LaeEnumeration enumerate_lae_expectations(const BernoulliModel& model, double p);

// Draws W ~ prior (respecting zero_diag). Shared by the MC oracles and tests.
std::vector<Matrix> sample_prior(const GaussianPrior& prior, int rows, int cols,
                                 long long count, std::uint64_t seed);

// Log-domain MC estimate of ln E_pi[e^{lambda R_true(W)}] with a leave-one-out
// jackknife standard error on the log scale.
EstimateWithError mc_log_mgf(const GaussianPrior& prior, const CorrelationTriple& corr,
                             double lambda, long long samples, std::uint64_t seed);

// Nested MC estimate of Psi(lambda, m): outer over W ~ prior, inner over
// datasets S ~ D^m. Inner jackknife errors are propagated through the outer
// log-mean-exp softmax weights.
EstimateWithError mc_psi(const GaussianDataModel& model, const GaussianPrior& prior,
                         double lambda, long long m, long long outer_samples,
                         long long inner_samples, std::uint64_t seed);

// Variant sharing caller-supplied outer samples with psi_exact, so outer MC
// noise cancels in cross-checks.
EstimateWithError mc_psi_with_samples(const GaussianDataModel& model,
                                      const std::vector<Matrix>& outer_samples,
                                      double lambda, long long m, long long inner_samples,
                                      std::uint64_t seed);

// Exact zero-diagonal log-MGF via the O(n^4) per-row eigendecompositions.
// Zero eigenvalues of the downdated matrices contribute through the
// (S_{j*} mu)^2 form, so no pseudo-inverse division occurs.
double log_mgf_zero_diag_direct(const GaussianPrior& prior, const CorrelationTriple& corr,
                          double lambda);

}  // namespace laeb
