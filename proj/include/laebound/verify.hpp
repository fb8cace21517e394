#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "laebound/common.hpp"

namespace laeb {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

enum class VerifyLevel { quick, full };

// Every check pins its tolerance in code and reports it in the detail string.

// RH assembly from reference component values reproduces the reference RH.
CheckResult check_rh_assembly_reference();

// Hold-out correlation algebra vs exhaustive (h, delta) enumeration.
CheckResult check_holdout_correlations(int models, const std::vector<double>& ps,
                                        std::uint64_t seed);

// Closed-form true risk vs the enumeration oracle's direct expectation.
CheckResult check_true_risk_closed_form(int trials, std::uint64_t seed);

// Closed-form posterior vs random feasible perturbations and a
// projected-gradient minimizer of the same objective.
CheckResult check_posterior_optimality(int trials, int perturbations, std::uint64_t seed);

// Spectral log-MGF vs Monte Carlo over prior samples.
CheckResult check_log_mgf_spectral_mc(int instances, long long samples, std::uint64_t seed);

// Zero-diagonal O(n^4) log-MGF never exceeds the shared-spectrum upper bound.
CheckResult check_zero_diag_mgf_relaxation(int instances, int max_n, std::uint64_t seed);

// Exact psi vs nested Monte Carlo on shared outer samples; psi_exact <= psi_upper.
CheckResult check_psi_exact_mc(int instances, std::uint64_t seed);

// psi_exact decreasing in m and vanishing at m = 10^6 for a conforming prior.
CheckResult check_psi_convergence(std::uint64_t seed);

// Matrix KL formulas vs the sum of per-entry univariate Gaussian KLs.
CheckResult check_kl_entrywise(int trials, std::uint64_t seed);

// EASE closed form vs a per-row KKT system solved by a general LU factorization.
CheckResult check_ease_kkt(int trials, std::uint64_t seed);

// Frequency of LH > RH over independently regenerated (H, Delta) stays below
// delta plus three binomial standard deviations.
CheckResult check_bound_validity(int trials, double delta, std::uint64_t seed);

std::vector<CheckResult> run_verify(VerifyLevel level, std::uint64_t seed = 20240901);

}  // namespace laeb
