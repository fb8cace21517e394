#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "laebound/common.hpp"
#include "laebound/interactions.hpp"

namespace laeb {

/// Gaussian regression data: x ~ N(mu_x, sigma_x), y = w_star * x + e with
/// e ~ N(0, sigma_e). sigma_x may be singular; sigma_e must be PD.
struct GaussianDataModel {
    Vector mu_x;     // n
    Matrix sigma_x;  // n x n, PSD
    Matrix w_star;   // p x n
    Matrix sigma_e;  // p x p, PD

    int n() const { return static_cast<int>(mu_x.size()); }
    int p() const { return static_cast<int>(w_star.rows()); }
    void validate() const;
};

/// Multivariate Bernoulli over {0,1}^n: either an explicit probability table
/// over all 2^n outcomes (n <= 12) or an independent per-coordinate vector q.
class BernoulliModel {
  public:
    static constexpr int kMaxEnumerationDim = 12;

    static BernoulliModel enumeration(int n, std::vector<double> outcome_probs);
    static BernoulliModel factorized(Vector q);
    static BernoulliModel point_mass(const std::vector<int>& h);

    bool is_enumeration() const { return !outcome_probs_.empty(); }
    int n() const { return n_; }
    const std::vector<double>& outcome_probs() const { return outcome_probs_; }
    const Vector& q() const { return q_; }

    // Bit i of an outcome index is coordinate i (LSB = item 0).
    static bool outcome_bit(std::uint64_t outcome, int i) {
        return ((outcome >> i) & 1ULL) != 0;
    }

  private:
    int n_ = 0;
    std::vector<double> outcome_probs_;
    Vector q_;
};

std::pair<Matrix, Matrix> sample_regression(const GaussianDataModel& model,
                                            long long m, std::uint64_t seed);

InteractionMatrix sample_bernoulli(const BernoulliModel& model, int m,
                                   std::uint64_t seed);

Matrix exact_correlation(const BernoulliModel& model);

}  // namespace laeb
