#pragma once

#include "laebound/common.hpp"
#include "laebound/interactions.hpp"

namespace laeb {

/// EASE linear autoencoder: n x n weights with an exactly zero diagonal.
struct EaseModel {
    Matrix weights;
    double gamma = 0.0;
};

// Accumulates the dense item-item Gram H H^T without materializing a dense H.
Matrix gram_matrix(const InteractionMatrix& h);

EaseModel train_ease(const InteractionMatrix& h_train, double gamma);
EaseModel train_ease_from_gram(const Matrix& gram, double gamma);

}  // namespace laeb
