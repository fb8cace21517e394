#include "laebound/oracle.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "laebound/numerics.hpp"
#include "laebound/rng.hpp"

namespace laeb {

namespace {

EstimateWithError summarize(const std::vector<double>& values) {
    const auto n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var = values.size() > 1 ? var / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n), static_cast<long long>(values.size())};
}

// Leave-one-out jackknife of a log-mean-exp statistic, done in log domain.
EstimateWithError jackknife_log_mean_exp(const std::vector<double>& logs) {
    const auto n = static_cast<double>(logs.size());
    const double lse = log_sum_exp(logs);
    const double estimate = lse - std::log(n);

    std::vector<double> loo(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) {
        // log(exp(lse) - exp(logs[i])) = lse + log(1 - e^d); the clamp keeps
        // a single dominating sample from collapsing the difference to -inf.
        const double d = std::min(logs[i] - lse, -1e-15);
        loo[i] = lse + std::log(-std::expm1(d)) - std::log(n - 1.0);
    }
    double loo_mean = 0.0;
    for (double v : loo) loo_mean += v;
    loo_mean /= n;
    double var = 0.0;
    for (double v : loo) var += (v - loo_mean) * (v - loo_mean);
    var *= (n - 1.0) / n;
    return {estimate, std::sqrt(var), static_cast<long long>(logs.size())};
}

}  // namespace

EstimateWithError mc_true_risk(const GaussianDataModel& model, const Matrix& w,
                               long long samples, std::uint64_t seed) {
    if (samples < 1000) throw ArgumentError("mc_true_risk needs at least 1000 samples");
    model.validate();
    const Matrix lx = psd_sqrt(model.sigma_x);
    const Matrix le = psd_sqrt(model.sigma_e);
    const int n = model.n();
    const int p = model.p();

    RngStream rng(seed, /*stream=*/10);
    Vector z(n), e(p), x(n), r(p);
    std::vector<double> losses(static_cast<std::size_t>(samples));
    for (long long s = 0; s < samples; ++s) {
        for (int i = 0; i < n; ++i) z(i) = rng.normal();
        for (int i = 0; i < p; ++i) e(i) = rng.normal();
        x = model.mu_x + lx * z;
        r = model.w_star * x + le * e - w * x;
        losses[static_cast<std::size_t>(s)] = r.squaredNorm();
    }
    return summarize(losses);
}

EstimateWithError mc_true_risk(const BernoulliModel& model, double p, const Matrix& w,
                               long long samples, std::uint64_t seed) {
    if (samples < 1000) throw ArgumentError("mc_true_risk needs at least 1000 samples");
    if (!(p > 0.0 && p < 1.0)) throw ArgumentError("retention fraction p must lie in (0, 1)");
    const int n = model.n();
    if (w.rows() != n || w.cols() != n) throw DimensionError("W must be n x n");

    RngStream rng(seed, /*stream=*/11);
    std::vector<double> cdf;
    if (model.is_enumeration()) {
        cdf.assign(model.outcome_probs().begin(), model.outcome_probs().end());
        for (std::size_t k = 1; k < cdf.size(); ++k) cdf[k] += cdf[k - 1];
    }

    Vector x(n), y(n), r(n);
    std::vector<double> losses(static_cast<std::size_t>(samples));
    for (long long s = 0; s < samples; ++s) {
        x.setZero();
        y.setZero();
        if (model.is_enumeration()) {
            const double u = rng.uniform();
            std::size_t k = 0;
            while (k + 1 < cdf.size() && u >= cdf[k]) ++k;
            for (int i = 0; i < n; ++i) {
                if (!BernoulliModel::outcome_bit(k, i)) continue;
                if (rng.uniform() < p) x(i) = 1.0; else y(i) = 1.0;
            }
        } else {
            for (int i = 0; i < n; ++i) {
                if (rng.uniform() >= model.q()(i)) continue;
                if (rng.uniform() < p) x(i) = 1.0; else y(i) = 1.0;
            }
        }
        r = y - w * x;
        losses[static_cast<std::size_t>(s)] = r.squaredNorm();
    }
    return summarize(losses);
}

LaeEnumeration::LaeEnumeration(const BernoulliModel& model, double p) {
    if (!(p > 0.0 && p <= 1.0)) throw ArgumentError("retention fraction p must lie in (0, 1]");
    n_ = model.n();
    if (n_ > BernoulliModel::kMaxEnumerationDim) {
        throw CapacityError("enumeration oracle supports n <= 12");
    }

    std::vector<double> table;
    if (model.is_enumeration()) {
        table = model.outcome_probs();
    } else {
        // Expand the factorized law into an explicit table.
        table.assign(1ULL << n_, 0.0);
        for (std::uint64_t h = 0; h < table.size(); ++h) {
            double prob = 1.0;
            for (int i = 0; i < n_; ++i) {
                const double qi = model.q()(i);
                prob *= BernoulliModel::outcome_bit(h, i) ? qi : 1.0 - qi;
            }
            table[h] = prob;
        }
    }

    sigma_xx_ = Matrix::Zero(n_, n_);
    sigma_xy_ = Matrix::Zero(n_, n_);
    sigma_yy_ = Matrix::Zero(n_, n_);

    for (std::uint64_t h = 0; h < table.size(); ++h) {
        const double ph = table[h];
        if (ph == 0.0) continue;
        std::vector<int> ones;
        for (int i = 0; i < n_; ++i) {
            if (BernoulliModel::outcome_bit(h, i)) ones.push_back(i);
        }
        const auto k = static_cast<int>(ones.size());
        // delta restricted to the support of h: 2^k mask outcomes.
        for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
            const int kept = static_cast<int>(std::popcount(mask));
            const double weight =
                ph * std::pow(p, kept) * std::pow(1.0 - p, k - kept);
            if (weight == 0.0) continue;
            Outcome outcome;
            outcome.x = Vector::Zero(n_);
            outcome.y = Vector::Zero(n_);
            outcome.weight = weight;
            for (int b = 0; b < k; ++b) {
                if ((mask >> b) & 1ULL) outcome.x(ones[static_cast<std::size_t>(b)]) = 1.0;
                else outcome.y(ones[static_cast<std::size_t>(b)]) = 1.0;
            }
            sigma_xx_ += weight * outcome.x * outcome.x.transpose();
            sigma_xy_ += weight * outcome.x * outcome.y.transpose();
            sigma_yy_ += weight * outcome.y * outcome.y.transpose();
            outcomes_.push_back(std::move(outcome));
        }
    }
}

double LaeEnumeration::true_risk(const Matrix& w) const {
    if (w.rows() != n_ || w.cols() != n_) throw DimensionError("W must be n x n");
    double risk = 0.0;
    for (const Outcome& o : outcomes_) {
        risk += o.weight * (o.y - w * o.x).squaredNorm();
    }
    return risk;
}

LaeEnumeration enumerate_lae_expectations(const BernoulliModel& model, double p) {
    return LaeEnumeration(model, p);
}

std::vector<Matrix> sample_prior(const GaussianPrior& prior, int rows, int cols,
                                 long long count, std::uint64_t seed) {
    prior.validate();
    if (prior.u0.rows() != rows || prior.u0.cols() != cols) {
        throw DimensionError("sample_prior: prior mean shape mismatch");
    }
    RngStream rng(seed, /*stream=*/12);
    std::vector<Matrix> samples;
    samples.reserve(static_cast<std::size_t>(count));
    for (long long s = 0; s < count; ++s) {
        Matrix w(rows, cols);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                w(i, j) = prior.u0(i, j) + prior.sigma * rng.normal();
            }
        }
        if (prior.zero_diag) w.diagonal().setZero();
        samples.push_back(std::move(w));
    }
    return samples;
}

EstimateWithError mc_log_mgf(const GaussianPrior& prior, const CorrelationTriple& corr,
                             double lambda, long long samples, std::uint64_t seed) {
    if (samples < 10000) throw ArgumentError("mc_log_mgf needs at least 10^4 samples");
    if (!(lambda > 0.0)) throw ArgumentError("lambda must be positive");
    const int n = corr.n();
    prior.validate();

    RngStream rng(seed, /*stream=*/13);
    Matrix w(n, n);
    std::vector<double> logs(static_cast<std::size_t>(samples));
    for (long long s = 0; s < samples; ++s) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                w(i, j) = prior.u0(i, j) + prior.sigma * rng.normal();
            }
        }
        if (prior.zero_diag) w.diagonal().setZero();
        logs[static_cast<std::size_t>(s)] = lambda * true_risk_closed(corr, w);
    }
    return jackknife_log_mean_exp(logs);
}

namespace {

// ln of the inner average of e^{-lambda R_emp} over sampled datasets, with a
// jackknife standard error.
EstimateWithError inner_psi_estimate(const GaussianDataModel& model, const Matrix& w,
                                     double lambda, long long m, long long inner_samples,
                                     RngStream& rng, const Matrix& lx, const Matrix& le) {
    const int n = model.n();
    const int p = model.p();
    Vector z(n), e(p), x(n), r(p);
    std::vector<double> logs(static_cast<std::size_t>(inner_samples));
    for (long long s = 0; s < inner_samples; ++s) {
        double emp = 0.0;
        for (long long col = 0; col < m; ++col) {
            for (int i = 0; i < n; ++i) z(i) = rng.normal();
            for (int i = 0; i < p; ++i) e(i) = rng.normal();
            x = model.mu_x + lx * z;
            r = model.w_star * x + le * e - w * x;
            emp += r.squaredNorm();
        }
        emp /= static_cast<double>(m);
        logs[static_cast<std::size_t>(s)] = -lambda * emp;
    }
    return jackknife_log_mean_exp(logs);
}

}  // namespace

namespace {

EstimateWithError mc_psi_impl(const GaussianDataModel& model,
                              const std::vector<Matrix>& outer_samples, double lambda,
                              long long m, long long inner_samples, std::uint64_t seed,
                              bool include_outer_error) {
    if (outer_samples.empty()) throw ArgumentError("outer sample set is empty");
    if (!(lambda > 0.0)) throw ArgumentError("lambda must be positive");
    if (m < 1 || inner_samples < 2) throw ArgumentError("m and inner_samples too small");
    model.validate();
    const Matrix lx = psd_sqrt(model.sigma_x);
    const Matrix le = psd_sqrt(model.sigma_e);

    std::vector<double> outer_logs;
    std::vector<double> inner_errs;
    outer_logs.reserve(outer_samples.size());
    inner_errs.reserve(outer_samples.size());
    std::uint64_t stream = 0;
    for (const Matrix& w : outer_samples) {
        RngStream rng(seed, hash_combine(14, stream++));
        const EstimateWithError inner =
            inner_psi_estimate(model, w, lambda, m, inner_samples, rng, lx, le);
        const double true_risk = error_moments(model, w).true_risk();
        outer_logs.push_back(lambda * true_risk + inner.mean);
        inner_errs.push_back(inner.stderr_);
    }

    const double lse = log_sum_exp(outer_logs);
    EstimateWithError out;
    out.mean = lse - std::log(static_cast<double>(outer_logs.size()));
    out.samples = static_cast<long long>(outer_samples.size()) * inner_samples;
    // d psi / d inner_log_i is the softmax weight of outer term i.
    double var = 0.0;
    for (std::size_t i = 0; i < outer_logs.size(); ++i) {
        const double weight = std::exp(outer_logs[i] - lse);
        var += weight * weight * inner_errs[i] * inner_errs[i];
    }
    if (include_outer_error) {
        const EstimateWithError outer = jackknife_log_mean_exp(outer_logs);
        var += outer.stderr_ * outer.stderr_;
    }
    out.stderr_ = std::sqrt(var);
    return out;
}

}  // namespace

EstimateWithError mc_psi_with_samples(const GaussianDataModel& model,
                                      const std::vector<Matrix>& outer_samples,
                                      double lambda, long long m, long long inner_samples,
                                      std::uint64_t seed) {
    // Shared-samples variant: outer noise cancels in cross-checks against
    // exact values on the same samples, so only inner error is propagated.
    return mc_psi_impl(model, outer_samples, lambda, m, inner_samples, seed, false);
}

EstimateWithError mc_psi(const GaussianDataModel& model, const GaussianPrior& prior,
                         double lambda, long long m, long long outer_samples,
                         long long inner_samples, std::uint64_t seed) {
    const std::vector<Matrix> samples =
        sample_prior(prior, model.p(), model.n(), outer_samples, seed);
    return mc_psi_impl(model, samples, lambda, m, inner_samples, hash_combine(seed, 15),
                       true);
}

double log_mgf_zero_diag_direct(const GaussianPrior& prior, const CorrelationTriple& corr,
                          double lambda) {
    prior.validate();
    if (!prior.zero_diag) {
        throw ArgumentError("log_mgf_zero_diag_direct applies to zero-diagonal priors");
    }
    if (!(lambda > 0.0)) throw ArgumentError("lambda must be positive");
    const int n = corr.n();
    if (n > 50) throw CapacityError("log_mgf_zero_diag_direct is O(n^4); n <= 50");

    const double sigma2 = prior.sigma * prior.sigma;
    const Matrix mu = prior.u0 * corr.sqrt_xx + corr.b;

    double value = lambda * corr.c_log;
    for (int i = 0; i < n; ++i) {
        const Vector col = corr.sqrt_xx.col(i);
        Matrix a_i = sigma2 * (corr.sigma_xx - col * col.transpose());
        const SpectralDecomposition eig = sym_eig(a_i);
        const double threshold = 1.0 / (2.0 * eig.eigenvalues(0));
        if (lambda >= threshold) {
            std::ostringstream msg;
            msg << "lambda " << lambda << " is outside row " << i
                << "'s MGF domain (needs < " << threshold << ")";
            throw MgfDomainError(msg.str(), threshold);
        }
        const Vector t = eig.eigenvectors * mu.row(i).transpose();  // S^{(i)} mu^i
        for (int j = 0; j < n; ++j) {
            const double eta = eig.eigenvalues(j);
            const double denom = 1.0 - 2.0 * lambda * eta;
            value += lambda * t(j) * t(j) / denom;
            value -= 0.5 * std::log(denom);
        }
    }
    return value;
}

}  // namespace laeb
