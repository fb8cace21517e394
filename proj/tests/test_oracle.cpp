#include <doctest.h>

#include <cmath>

#include "laebound/oracle.hpp"
#include "laebound/rng.hpp"

using namespace laeb;

namespace {

Matrix random_matrix(int rows, int cols, double scale, RngStream& rng) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m(i, j) = scale * rng.normal();
    }
    return m;
}

CorrelationTriple toy_triple(std::uint64_t seed, int n = 3, double p = 0.5) {
    RngStream rng(seed);
    Vector q(n);
    for (int i = 0; i < n; ++i) q(i) = 0.3 + 0.4 * rng.uniform();
    return correlations_from_holdout(exact_correlation(BernoulliModel::factorized(q)), p);
}

}  // namespace

TEST_CASE("mc_true_risk on a point mass has zero spread") {
    const BernoulliModel empty = BernoulliModel::point_mass({0, 0, 0});
    const EstimateWithError est = mc_true_risk(empty, 0.5, Matrix::Identity(3, 3), 2000, 1);
    CHECK(est.mean == 0.0);
    CHECK(est.stderr_ == 0.0);
}

TEST_CASE("mc_true_risk recovers tr(sigma_e) at W = W*") {
    GaussianDataModel model;
    model.mu_x = Vector::Zero(3);
    RngStream rng(131);
    const Matrix a = random_matrix(3, 3, 0.8, rng);
    model.sigma_x = a * a.transpose();
    model.w_star = random_matrix(2, 3, 0.5, rng);
    const Matrix b = random_matrix(2, 2, 0.6, rng);
    model.sigma_e = b * b.transpose() + 0.2 * Matrix::Identity(2, 2);

    const EstimateWithError est = mc_true_risk(model, model.w_star, 200000, 2);
    CHECK(std::abs(est.mean - model.sigma_e.trace()) <= 5.0 * est.stderr_);
}

TEST_CASE("mc_true_risk LAE generator matches the closed form") {
    RngStream rng(132);
    Vector q(3);
    for (int i = 0; i < 3; ++i) q(i) = 0.3 + 0.4 * rng.uniform();
    const BernoulliModel model = BernoulliModel::factorized(q);
    const double p = 0.5;
    const CorrelationTriple corr =
        correlations_from_holdout(exact_correlation(model), p);
    const Matrix w = random_matrix(3, 3, 0.5, rng);

    const EstimateWithError est = mc_true_risk(model, p, w, 400000, 3);
    CHECK(std::abs(est.mean - true_risk_closed(corr, w)) <= 5.0 * est.stderr_);
}

TEST_CASE("mc_true_risk stderr scales like 1/sqrt(samples)") {
    RngStream rng(133);
    Vector q(3);
    for (int i = 0; i < 3; ++i) q(i) = 0.4;
    const BernoulliModel model = BernoulliModel::factorized(q);
    const Matrix w = random_matrix(3, 3, 0.6, rng);
    const EstimateWithError small = mc_true_risk(model, 0.5, w, 40000, 4);
    const EstimateWithError large = mc_true_risk(model, 0.5, w, 160000, 5);
    const double ratio = small.stderr_ / large.stderr_;
    CHECK(ratio > 1.6);
    CHECK(ratio < 2.4);
}

TEST_CASE("oracles are seed-deterministic") {
    const BernoulliModel model = BernoulliModel::factorized(Vector::Constant(3, 0.4));
    RngStream rng(134);
    const Matrix w = random_matrix(3, 3, 0.5, rng);
    const EstimateWithError a = mc_true_risk(model, 0.5, w, 5000, 42);
    const EstimateWithError b = mc_true_risk(model, 0.5, w, 5000, 42);
    CHECK(a.mean == b.mean);
    CHECK(a.stderr_ == b.stderr_);
}

TEST_CASE("enumerate_lae_expectations point-mass hand case") {
    const BernoulliModel point = BernoulliModel::point_mass({1, 0});
    const LaeEnumeration enumerated(point, 0.5);
    Matrix xx_expected = Matrix::Zero(2, 2);
    xx_expected(0, 0) = 0.5;
    CHECK((enumerated.sigma_xx() - xx_expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((enumerated.sigma_yy() - xx_expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(enumerated.sigma_xy().cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("enumerate_lae_expectations nearly-full retention empties the target") {
    RngStream rng(135);
    Vector q(3);
    for (int i = 0; i < 3; ++i) q(i) = 0.3 + 0.4 * rng.uniform();
    const BernoulliModel model = BernoulliModel::factorized(q);
    const Matrix sigma_hh = exact_correlation(model);
    const LaeEnumeration enumerated(model, 0.999);
    CHECK(enumerated.sigma_yy().cwiseAbs().maxCoeff() <=
          2e-3 * sigma_hh.cwiseAbs().maxCoeff());
}

TEST_CASE("enumeration capacity guard") {
    CHECK_THROWS_AS(BernoulliModel::enumeration(13, std::vector<double>(1 << 13, 0.0)),
                    CapacityError);
}

TEST_CASE("mc_log_mgf degenerate prior recovers the point value") {
    const CorrelationTriple corr = toy_triple(136);
    RngStream rng(137);
    Matrix u0 = random_matrix(3, 3, 0.4, rng);
    u0.diagonal().setZero();
    const GaussianPrior prior{u0, 1e-6, true};
    const double lambda = 1.5;
    const EstimateWithError est = mc_log_mgf(prior, corr, lambda, 20000, 6);
    const double target = lambda * true_risk_closed(corr, u0);
    CHECK(std::abs(est.mean - target) <= 5.0 * est.stderr_ + 1e-6);
}

TEST_CASE("mc_log_mgf agrees with the spectral closed form") {
    const CorrelationTriple corr = toy_triple(138);
    RngStream rng(139);
    const GaussianPrior prior{random_matrix(3, 3, 0.3, rng), 0.25, false};
    const double lambda = 0.4 * mgf_lambda_threshold(prior, corr);
    const LogMgf closed = log_mgf_prior(prior, corr, lambda);
    const EstimateWithError est = mc_log_mgf(prior, corr, lambda, 300000, 7);
    CHECK(std::abs(est.mean - closed.value) <= 5.0 * est.stderr_);
    CHECK(!closed.is_upper_bound);
}

TEST_CASE("mc_log_mgf zero-diagonal stays below the relaxed closed form") {
    const CorrelationTriple corr = toy_triple(140);
    RngStream rng(141);
    Matrix u0 = random_matrix(3, 3, 0.3, rng);
    u0.diagonal().setZero();
    const GaussianPrior prior{u0, 0.25, true};
    const double lambda = 0.4 * mgf_lambda_threshold(prior, corr);
    const LogMgf upper = log_mgf_prior(prior, corr, lambda);
    const EstimateWithError est = mc_log_mgf(prior, corr, lambda, 200000, 8);
    CHECK(est.mean <= upper.value + 5.0 * est.stderr_);
    CHECK(upper.is_upper_bound);
}

TEST_CASE("log_mgf_zero_diag_direct degenerate prior limit") {
    const CorrelationTriple corr = toy_triple(142);
    RngStream rng(143);
    Matrix u0 = random_matrix(3, 3, 0.4, rng);
    u0.diagonal().setZero();
    const GaussianPrior prior{u0, 1e-6, true};
    const double lambda = 2.0;
    const double value = log_mgf_zero_diag_direct(prior, corr, lambda);
    const double target = lambda * true_risk_closed(corr, u0);
    CHECK(std::abs(value - target) <= 1e-3 * std::max(1.0, std::abs(target)));
}

TEST_CASE("log_mgf_zero_diag_direct matches zero-diagonal Monte Carlo") {
    const CorrelationTriple corr = toy_triple(144);
    RngStream rng(145);
    Matrix u0 = random_matrix(3, 3, 0.3, rng);
    u0.diagonal().setZero();
    const GaussianPrior prior{u0, 0.25, true};
    const double lambda = 0.4 * mgf_lambda_threshold(prior, corr);
    const double direct = log_mgf_zero_diag_direct(prior, corr, lambda);
    const EstimateWithError est = mc_log_mgf(prior, corr, lambda, 400000, 9);
    CHECK(std::abs(est.mean - direct) <= 5.0 * est.stderr_);
}

TEST_CASE("log_mgf_zero_diag_direct rejects unconstrained priors and bad lambda") {
    const CorrelationTriple corr = toy_triple(146);
    RngStream rng(147);
    const GaussianPrior plain{random_matrix(3, 3, 0.3, rng), 0.3, false};
    CHECK_THROWS_AS(log_mgf_zero_diag_direct(plain, corr, 0.5), ArgumentError);

    Matrix u0 = random_matrix(3, 3, 0.3, rng);
    u0.diagonal().setZero();
    const GaussianPrior prior{u0, 0.3, true};
    CHECK_THROWS_AS(log_mgf_zero_diag_direct(prior, corr, 1e9), MgfDomainError);
}

TEST_CASE("mc_psi vanishes as lambda goes to zero") {
    RngStream rng(148);
    GaussianDataModel model;
    model.mu_x = Vector::Zero(3);
    const Matrix a = random_matrix(3, 3, 0.7, rng);
    model.sigma_x = a * a.transpose() / 3.0;
    model.w_star = random_matrix(2, 3, 0.5, rng);
    const Matrix b = random_matrix(2, 2, 0.5, rng);
    model.sigma_e = b * b.transpose() / 2.0 + 0.2 * Matrix::Identity(2, 2);
    const GaussianPrior prior{model.w_star, 0.2, false};

    const EstimateWithError est = mc_psi(model, prior, 1e-6, 5, 50, 200, 10);
    CHECK(std::abs(est.mean) <= 5.0 * est.stderr_ + 1e-4);
}

TEST_CASE("mc_psi decreases with m") {
    RngStream rng(149);
    GaussianDataModel model;
    model.mu_x = Vector::Zero(3);
    const Matrix a = random_matrix(3, 3, 0.7, rng);
    model.sigma_x = a * a.transpose() / 3.0;
    model.w_star = random_matrix(2, 3, 0.5, rng);
    const Matrix b = random_matrix(2, 2, 0.5, rng);
    model.sigma_e = b * b.transpose() / 2.0 + 0.2 * Matrix::Identity(2, 2);
    const GaussianPrior prior{model.w_star, 0.25, false};
    const std::vector<Matrix> outer = sample_prior(prior, 2, 3, 60, 11);

    const double psi5 = mc_psi_with_samples(model, outer, 0.2, 5, 600, 12).mean;
    const double psi50 = mc_psi_with_samples(model, outer, 0.2, 50, 600, 13).mean;
    const double psi500 = mc_psi_with_samples(model, outer, 0.2, 500, 600, 14).mean;
    CHECK(psi5 > psi50);
    CHECK(psi50 > psi500);
}

TEST_CASE("jackknife stderr shrinks with sample size") {
    const CorrelationTriple corr = toy_triple(150);
    RngStream rng(151);
    const GaussianPrior prior{random_matrix(3, 3, 0.3, rng), 0.2, false};
    const double lambda = 0.3 * mgf_lambda_threshold(prior, corr);
    const EstimateWithError small = mc_log_mgf(prior, corr, lambda, 20000, 15);
    const EstimateWithError large = mc_log_mgf(prior, corr, lambda, 80000, 16);
    const double ratio = small.stderr_ / large.stderr_;
    CHECK(ratio > 1.4);
    CHECK(ratio < 2.8);
}
