// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "laebound/ease.hpp"
#include "laebound/interactions.hpp"
#include "laebound/lae_bound.hpp"
#include "laebound/metrics.hpp"
#include "laebound/rng.hpp"
#include "laebound/verify.hpp"

using namespace laeb;

namespace {

constexpr std::uint64_t kSeed = 20240901;

// Clustered implicit-feedback generator with globally popular blockbuster
// items and heavy background noise, so the gamma grid spans models of
// genuinely different quality.
InteractionMatrix synthetic_dataset(int n, int m, std::uint64_t seed) {
    RngStream rng(seed);
    const int clusters = 5;
    const int blockbusters = 5;
    const int block = (n - blockbusters) / clusters;
    InteractionMatrix h(n, m);
    for (int u = 0; u < m; ++u) {
        const int c = static_cast<int>(rng.below(static_cast<std::uint64_t>(clusters)));
        for (int i = 0; i < blockbusters; ++i) {
            if (rng.uniform() < 0.6) h.insert(i, u);
        }
        for (int i = blockbusters; i < n; ++i) {
            const int rel = i - blockbusters;
            const bool in_block = rel >= c * block && rel < (c + 1) * block;
            if (rng.uniform() < (in_block ? 0.35 : 0.12)) h.insert(i, u);
        }
    }
    return h;
}

std::vector<double> ranks_with_ties(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const std::vector<double> ra = ranks_with_ties(a);
    const std::vector<double> rb = ranks_with_ties(b);
    const double n = static_cast<double>(a.size());
    double mean_a = 0.0;
    double mean_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mean_a += ra[i];
        mean_b += rb[i];
    }
    mean_a /= n;
    mean_b /= n;
    double cov = 0.0;
    double var_a = 0.0;
    double var_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (ra[i] - mean_a) * (rb[i] - mean_b);
        var_a += (ra[i] - mean_a) * (ra[i] - mean_a);
        var_b += (rb[i] - mean_b) * (rb[i] - mean_b);
    }
    return cov / std::sqrt(var_a * var_b);
}

// End-to-end: across the seven gamma values, the bound's RH must rank models
// the same way NDCG@100 does (negatively).
CheckResult check_end_to_end_correlation() {
    const InteractionMatrix whole = synthetic_dataset(100, 2000, kSeed);
    const auto [train, test] = strong_split(whole, 0.7, hash_combine(kSeed, 1));
    const HoldoutSplit split = holdout_mask(test, 0.5, hash_combine(kSeed, 2));
    const Matrix sigma_hh = population_correlation(whole);
    const CorrelationTriple corr = correlations_from_holdout(sigma_hh, 0.5);

    BoundConfig config;  // sigma = 0.001, delta = 0.01, lambda 1..512
    std::vector<double> rhs;
    std::vector<double> ndcgs;
    for (double gamma : {50.0, 100.0, 200.0, 500.0, 1000.0, 2000.0, 5000.0}) {
        const EaseModel model = train_ease(train, gamma);
        const BoundReport report =
            compute_bound(corr, 0.5, split.x, split.y, model.weights, config);
        rhs.push_back(report.grid[report.best_index].rh);
        const RankingResult ranking =
            evaluate_ranking(model.weights, split.x, split.y, {100});
        ndcgs.push_back(ranking.ndcg.at(100));
    }
    const double rho = spearman(rhs, ndcgs);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "Spearman(RH, NDCG@100) = %.4f over 7 gammas (must be negative)", rho);
    return {"end-to-end-correlation", rho < 0.0, detail};
}

struct Criterion {
    int number;
    CheckResult (*run)();
};

}  // namespace

int main() {
    using Clock = std::chrono::steady_clock;
    const std::vector<Criterion> criteria = {
        {1, [] { return check_rh_assembly_reference(); }},
        {2, [] { return check_holdout_correlations(20, {0.3, 0.5, 0.7}, kSeed); }},
        {3, [] { return check_true_risk_closed_form(20, kSeed); }},
        {4, [] { return check_posterior_optimality(20, 1000, kSeed); }},
        {5, [] { return check_log_mgf_spectral_mc(10, 1000000, kSeed); }},
        {6, [] { return check_zero_diag_mgf_relaxation(100, 20, kSeed); }},
        {7, [] { return check_psi_exact_mc(5, kSeed); }},
        {8, [] { return check_psi_convergence(kSeed); }},
        {9, [] { return check_bound_validity(200, 0.05, kSeed); }},
        {10, [] { return check_ease_kkt(20, kSeed); }},
        {11, [] { return check_kl_entrywise(20, kSeed); }},
        {12, [] { return check_end_to_end_correlation(); }},
    };

    bool all = true;
    for (const Criterion& criterion : criteria) {
        const auto start = Clock::now();
        const CheckResult result = criterion.run();
        const double seconds =
            std::chrono::duration<double>(Clock::now() - start).count();
        std::printf("[%s] criterion %2d (%s): %s  [%.1fs]\n",
                    result.passed ? "PASS" : "FAIL", criterion.number,
                    result.name.c_str(), result.detail.c_str(), seconds);
        std::fflush(stdout);
        all = all && result.passed;
    }
    std::printf(all ? "acceptance: all criteria passed\n"
                    : "acceptance: some criteria FAILED\n");
    return all ? 0 : 1;
}
