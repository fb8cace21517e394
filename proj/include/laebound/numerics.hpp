#pragma once

#include <span>
#include <vector>

#include "laebound/common.hpp"

namespace laeb {

/// Eigendecomposition of a symmetric matrix: input = S^T diag(eigenvalues) S,
/// where the rows of S are the eigenvectors. Eigenvalues are sorted
/// non-increasing; the first nonzero component of each eigenvector is positive
/// so the decomposition is deterministic.
struct SpectralDecomposition {
    Vector eigenvalues;
    Matrix eigenvectors;

    Matrix reconstruct() const {
        return eigenvectors.transpose() * eigenvalues.asDiagonal() * eigenvectors;
    }
};

// Relative tolerances keyed on the top eigenvalue. Eigenvalues in
// [-clamp_tolerance, 0) are treated as exact zeros; invertibility requires
// eigenvalues strictly above pd_tolerance.
inline double clamp_tolerance(double top_eigenvalue) {
    return std::max(1.0, top_eigenvalue) * 1e-10;
}

inline double pd_tolerance(double top_eigenvalue) {
    return std::max(1.0, top_eigenvalue) * 1e-12;
}

SpectralDecomposition sym_eig(const Matrix& m);

Matrix psd_sqrt(const Matrix& m);

Matrix psd_inv_sqrt(const Matrix& m);

double log_sum_exp(std::span<const double> values);

inline double log_mean_exp(std::span<const double> values) {
    return log_sum_exp(values) - std::log(static_cast<double>(values.size()));
}

}  // namespace laeb
