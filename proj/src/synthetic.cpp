#include "laebound/synthetic.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "laebound/numerics.hpp"
#include "laebound/rng.hpp"

namespace laeb {

void GaussianDataModel::validate() const {
    if (sigma_x.rows() != n() || sigma_x.cols() != n()) {
        throw DimensionError("sigma_x shape does not match mu_x");
    }
    if (w_star.cols() != n()) {
        throw DimensionError("w_star column count does not match mu_x");
    }
    if (sigma_e.rows() != p() || sigma_e.cols() != p()) {
        throw DimensionError("sigma_e shape does not match w_star rows");
    }
}

BernoulliModel BernoulliModel::enumeration(int n, std::vector<double> outcome_probs) {
    if (n < 1 || n > kMaxEnumerationDim) {
        throw CapacityError("enumeration mode supports 1 <= n <= " +
                            std::to_string(kMaxEnumerationDim));
    }
    if (outcome_probs.size() != (1ULL << n)) {
        throw ArgumentError("probability table must have 2^n entries");
    }
    double total = 0.0;
    for (double p : outcome_probs) {
        if (p < 0.0) throw ArgumentError("outcome probabilities must be non-negative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "outcome probabilities sum to " << total << ", expected 1";
        throw ArgumentError(msg.str());
    }
    BernoulliModel model;
    model.n_ = n;
    model.outcome_probs_ = std::move(outcome_probs);
    return model;
}

BernoulliModel BernoulliModel::factorized(Vector q) {
    if (q.size() < 1) throw ArgumentError("factorized model needs n >= 1");
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        if (q(i) < 0.0 || q(i) > 1.0) {
            throw ArgumentError("factorized probabilities must lie in [0, 1]");
        }
    }
    BernoulliModel model;
    model.n_ = static_cast<int>(q.size());
    model.q_ = std::move(q);
    return model;
}

BernoulliModel BernoulliModel::point_mass(const std::vector<int>& h) {
    const int n = static_cast<int>(h.size());
    std::vector<double> probs(1ULL << n, 0.0);
    std::uint64_t outcome = 0;
    for (int i = 0; i < n; ++i) {
        if (h[static_cast<std::size_t>(i)] != 0) outcome |= 1ULL << i;
    }
    probs[outcome] = 1.0;
    return enumeration(n, std::move(probs));
}

std::pair<Matrix, Matrix> sample_regression(const GaussianDataModel& model,
                                            long long m, std::uint64_t seed) {
    model.validate();
    if (m < 1) throw ArgumentError("sample count must be >= 1");
    const int n = model.n();
    const int p = model.p();
    const Matrix lx = psd_sqrt(model.sigma_x);
    const Matrix le = psd_sqrt(model.sigma_e);

    Matrix x(n, m);
    Matrix y(p, m);
    RngStream rng(seed, /*stream=*/2);
    Vector z(n);
    Vector w(p);
    for (long long col = 0; col < m; ++col) {
        for (int i = 0; i < n; ++i) z(i) = rng.normal();
        for (int i = 0; i < p; ++i) w(i) = rng.normal();
        x.col(col) = model.mu_x + lx * z;
        y.col(col) = model.w_star * x.col(col) + le * w;
    }
    return {std::move(x), std::move(y)};
}

InteractionMatrix sample_bernoulli(const BernoulliModel& model, int m,
                                   std::uint64_t seed) {
    if (m < 1) throw ArgumentError("sample count must be >= 1");
    const int n = model.n();
    InteractionMatrix h(n, m);
    RngStream rng(seed, /*stream=*/3);
    if (model.is_enumeration()) {
        const auto& probs = model.outcome_probs();
        std::vector<double> cdf(probs.size());
        std::partial_sum(probs.begin(), probs.end(), cdf.begin());
        for (int u = 0; u < m; ++u) {
            const double r = rng.uniform();
            std::size_t k = 0;
            while (k + 1 < cdf.size() && r >= cdf[k]) ++k;
            for (int i = 0; i < n; ++i) {
                if (BernoulliModel::outcome_bit(k, i)) h.insert(i, u);
            }
        }
    } else {
        const Vector& q = model.q();
        for (int u = 0; u < m; ++u) {
            for (int i = 0; i < n; ++i) {
                if (rng.uniform() < q(i)) h.insert(i, u);
            }
        }
    }
    return h;
}

Matrix exact_correlation(const BernoulliModel& model) {
    const int n = model.n();
    if (model.is_enumeration()) {
        Matrix corr = Matrix::Zero(n, n);
        const auto& probs = model.outcome_probs();
        for (std::uint64_t outcome = 0; outcome < probs.size(); ++outcome) {
            const double w = probs[outcome];
            if (w == 0.0) continue;
            for (int i = 0; i < n; ++i) {
                if (!BernoulliModel::outcome_bit(outcome, i)) continue;
                for (int j = 0; j < n; ++j) {
                    if (BernoulliModel::outcome_bit(outcome, j)) corr(i, j) += w;
                }
            }
        }
        return corr;
    }
    const Vector& q = model.q();
    Matrix corr = q * q.transpose();
    corr.diagonal() = q;  // h_i^2 = h_i for binary coordinates
    return corr;
}

}  // namespace laeb
