#include "laebound/ease.hpp"

namespace laeb {

Matrix gram_matrix(const InteractionMatrix& h) {
    const int n = h.n();
    Matrix gram = Matrix::Zero(n, n);
    for (int u = 0; u < h.m(); ++u) {
        const auto& items = h.items_of_user(u);
        for (std::size_t a = 0; a < items.size(); ++a) {
            for (std::size_t b = a; b < items.size(); ++b) {
                gram(items[a], items[b]) += 1.0;
            }
        }
    }
    Matrix full = gram.selfadjointView<Eigen::Upper>();
    return full;
}

EaseModel train_ease(const InteractionMatrix& h_train, double gamma) {
    if (h_train.n() < 2) throw ArgumentError("train_ease needs at least 2 items");
    return train_ease_from_gram(gram_matrix(h_train), gamma);
}

EaseModel train_ease_from_gram(const Matrix& gram, double gamma) {
    if (!(gamma > 0.0)) throw ArgumentError("gamma must be positive");
    if (gram.rows() != gram.cols() || gram.rows() < 2) {
        throw DimensionError("gram matrix must be square with n >= 2");
    }
    const Eigen::Index n = gram.rows();

    Matrix regularized = gram;
    regularized.diagonal().array() += gamma;
    Eigen::LLT<Matrix> llt(regularized);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("train_ease: H H^T + gamma I failed Cholesky factorization");
    }
    const Matrix p = llt.solve(Matrix::Identity(n, n));

    // W_ij = delta_ij - P_ij / P_ii, i.e. rows of P scaled by 1/diag(P).
    EaseModel model;
    model.gamma = gamma;
    model.weights = -(p.array().colwise() / p.diagonal().array()).matrix();
    model.weights += Matrix::Identity(n, n);
    model.weights.diagonal().setZero();
    return model;
}

}  // namespace laeb
