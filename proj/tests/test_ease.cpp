#include <doctest.h>

#include <cmath>

#include "laebound/ease.hpp"
#include "laebound/rng.hpp"
#include "laebound/synthetic.hpp"
#include "laebound/verify.hpp"

using namespace laeb;

namespace {

double ease_objective(const Matrix& h, const Matrix& w, double gamma) {
    return (h - w * h).squaredNorm() + gamma * w.squaredNorm();
}

InteractionMatrix random_interactions(int n, int m, double density, std::uint64_t seed) {
    return sample_bernoulli(BernoulliModel::factorized(Vector::Constant(n, density)), m,
                            seed);
}

}  // namespace

TEST_CASE("train_ease enforces an exactly zero diagonal") {
    const InteractionMatrix h = random_interactions(6, 25, 0.4, 31);
    const EaseModel model = train_ease(h, 2.5);
    CHECK(model.weights.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK(model.weights.rows() == 6);
}

TEST_CASE("train_ease argument checks") {
    const InteractionMatrix h = random_interactions(4, 10, 0.4, 32);
    CHECK_THROWS_AS(train_ease(h, 0.0), ArgumentError);
    CHECK_THROWS_AS(train_ease(h, -1.0), ArgumentError);
    CHECK_THROWS_AS(train_ease(InteractionMatrix(1, 5), 1.0), ArgumentError);
}

TEST_CASE("train_ease ridge limit kills the weights") {
    const InteractionMatrix h = random_interactions(5, 30, 0.4, 33);
    const double gram_scale = gram_matrix(h).cwiseAbs().maxCoeff();
    const double gamma = 1e8;
    const EaseModel model = train_ease(h, gamma);
    CHECK(model.weights.cwiseAbs().maxCoeff() <= 10.0 * gram_scale / gamma);
    CHECK(model.weights.norm() < 1e-4);
}

TEST_CASE("train_ease matches the row-wise KKT oracle") {
    const CheckResult check = check_ease_kkt(5, 34);
    INFO(check.detail);
    CHECK(check.passed);
}

TEST_CASE("train_ease off-diagonal gradient vanishes") {
    const InteractionMatrix h = random_interactions(5, 20, 0.45, 35);
    const double gamma = 3.0;
    const EaseModel model = train_ease(h, gamma);
    const Matrix dense = h.to_dense();

    // Central finite differences of the objective on off-diagonal coordinates.
    const double eps = 1e-5;
    const double base_scale = std::max(1.0, ease_objective(dense, model.weights, gamma));
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            if (i == j) continue;
            Matrix up = model.weights;
            Matrix down = model.weights;
            up(i, j) += eps;
            down(i, j) -= eps;
            const double grad =
                (ease_objective(dense, up, gamma) - ease_objective(dense, down, gamma)) /
                (2.0 * eps);
            CHECK(std::abs(grad) <= 1e-6 * base_scale);
        }
    }
}

TEST_CASE("train_ease beats random off-diagonal perturbations") {
    const InteractionMatrix h = random_interactions(5, 18, 0.4, 36);
    const double gamma = 1.5;
    const EaseModel model = train_ease(h, gamma);
    const Matrix dense = h.to_dense();
    const double base = ease_objective(dense, model.weights, gamma);

    RngStream rng(37);
    for (int k = 0; k < 1000; ++k) {
        Matrix delta(5, 5);
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) delta(i, j) = rng.normal();
        }
        delta.diagonal().setZero();
        delta *= 1e-3 / delta.norm();
        CHECK(ease_objective(dense, model.weights + delta, gamma) >= base);
    }
}

TEST_CASE("gram_matrix equals the dense product") {
    const InteractionMatrix h = random_interactions(7, 15, 0.35, 38);
    const Matrix dense = h.to_dense();
    CHECK((gram_matrix(h) - dense * dense.transpose()).cwiseAbs().maxCoeff() == 0.0);
}
