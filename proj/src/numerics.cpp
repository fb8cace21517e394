#include "laebound/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace laeb {

namespace {

// Deterministic sign: flip each eigenvector so its first non-negligible
// component is positive. Rows are unit norm, so the threshold is safe.
void fix_signs(Matrix& s) {
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        const double row_max = s.row(i).cwiseAbs().maxCoeff();
        for (Eigen::Index j = 0; j < s.cols(); ++j) {
            if (std::abs(s(i, j)) > 1e-12 * row_max) {
                if (s(i, j) < 0.0) s.row(i) = -s.row(i);
                break;
            }
        }
    }
}

}  // namespace

SpectralDecomposition sym_eig(const Matrix& m) {
    if (m.rows() != m.cols()) {
        std::ostringstream msg;
        msg << "sym_eig: matrix is not square (" << m.rows() << "x" << m.cols() << ")";
        throw DimensionError(msg.str());
    }
    const double scale = std::max(1.0, m.size() > 0 ? m.cwiseAbs().maxCoeff() : 0.0);
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * scale) {
        std::ostringstream msg;
        msg << "sym_eig: matrix is not symmetric (max |M - M^T| = " << asym << ")";
        throw ArgumentError(msg.str());
    }

    const Matrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "sym_eig: eigensolver failed to converge (n = " << m.rows()
            << ", |M|_max = " << scale << ", |M|_F = " << sym.norm() << ")";
        throw NumericalError(msg.str());
    }

    // Eigen returns ascending order with eigenvectors as columns.
    const Eigen::Index n = m.rows();
    SpectralDecomposition out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.eigenvectors.row(k) = solver.eigenvectors().col(n - 1 - k).transpose();
    }
    fix_signs(out.eigenvectors);
    return out;
}

Matrix psd_sqrt(const Matrix& m) {
    SpectralDecomposition eig = sym_eig(m);
    const double top = eig.eigenvalues.size() > 0 ? eig.eigenvalues(0) : 0.0;
    const double tol = clamp_tolerance(top);
    Vector roots(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        const double eta = eig.eigenvalues(i);
        if (eta < -tol) {
            std::ostringstream msg;
            msg << "psd_sqrt: matrix is not PSD (eigenvalue " << eta
                << " below -" << tol << ")";
            throw NotPsdError(msg.str(), eta);
        }
        roots(i) = std::sqrt(std::max(eta, 0.0));
    }
    Matrix r = eig.eigenvectors.transpose() * roots.asDiagonal() * eig.eigenvectors;
    return 0.5 * (r + r.transpose());
}

Matrix psd_inv_sqrt(const Matrix& m) {
    SpectralDecomposition eig = sym_eig(m);
    const Eigen::Index n = eig.eigenvalues.size();
    const double top = n > 0 ? eig.eigenvalues(0) : 0.0;
    const double tol = pd_tolerance(top);
    const double smallest = n > 0 ? eig.eigenvalues(n - 1) : 0.0;
    if (smallest <= tol) {
        std::ostringstream msg;
        msg << "psd_inv_sqrt: matrix is numerically singular (smallest eigenvalue "
            << smallest << " <= " << tol << ")";
        throw SingularMatrixError(msg.str(), smallest);
    }
    Vector inv_roots = eig.eigenvalues.array().sqrt().inverse();
    Matrix r = eig.eigenvectors.transpose() * inv_roots.asDiagonal() * eig.eigenvectors;
    return 0.5 * (r + r.transpose());
}

double log_sum_exp(std::span<const double> values) {
    if (values.empty()) return -std::numeric_limits<double>::infinity();
    const double peak = *std::max_element(values.begin(), values.end());
    if (!std::isfinite(peak)) return peak;
    double acc = 0.0;
    for (double v : values) acc += std::exp(v - peak);
    return peak + std::log(acc);
}

}  // namespace laeb
