#include "laebound/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace laeb {

RankedLists rank_predictions(const Matrix& w, const InteractionMatrix& x,
                             bool exclude_input, std::size_t top_k) {
    if (w.rows() != x.n() || w.cols() != x.n()) {
        throw DimensionError("rank_predictions: W must be n x n");
    }
    const int n = x.n();
    RankedLists ranked;
    ranked.items.resize(static_cast<std::size_t>(x.m()));

    Vector scores(n);
    std::vector<int> order;
    for (int u = 0; u < x.m(); ++u) {
        scores.setZero();
        const auto& input = x.items_of_user(u);
        for (int i : input) scores += w.col(i);

        order.clear();
        if (exclude_input) {
            auto next = input.begin();
            for (int i = 0; i < n; ++i) {
                if (next != input.end() && *next == i) {
                    ++next;
                    continue;
                }
                order.push_back(i);
            }
        } else {
            order.resize(static_cast<std::size_t>(n));
            std::iota(order.begin(), order.end(), 0);
        }

        auto better = [&](int a, int b) {
            if (scores(a) != scores(b)) return scores(a) > scores(b);
            return a < b;
        };
        if (top_k > 0 && top_k < order.size()) {
            std::partial_sort(order.begin(),
                              order.begin() + static_cast<std::ptrdiff_t>(top_k),
                              order.end(), better);
            order.resize(top_k);
        } else {
            std::sort(order.begin(), order.end(), better);
        }
        ranked.items[static_cast<std::size_t>(u)] = order;
    }
    return ranked;
}

namespace {

template <typename PerUser>
double mean_over_targeted_users(const RankedLists& ranked, const InteractionMatrix& y,
                                PerUser&& per_user) {
    double total = 0.0;
    long long users = 0;
    for (int u = 0; u < y.m(); ++u) {
        const auto& target = y.items_of_user(u);
        if (target.empty()) continue;
        total += per_user(ranked.items[static_cast<std::size_t>(u)], target);
        ++users;
    }
    return users > 0 ? total / static_cast<double>(users) : 0.0;
}

}  // namespace

double recall_at_k(const RankedLists& ranked, const InteractionMatrix& y, int k) {
    if (k < 1) throw ArgumentError("K must be >= 1");
    return mean_over_targeted_users(
        ranked, y, [&](const std::vector<int>& list, const std::vector<int>& target) {
            const std::size_t depth = std::min<std::size_t>(list.size(), static_cast<std::size_t>(k));
            long long hits = 0;
            for (std::size_t r = 0; r < depth; ++r) {
                if (std::binary_search(target.begin(), target.end(), list[r])) ++hits;
            }
            const auto denom = std::min<std::size_t>(static_cast<std::size_t>(k), target.size());
            return static_cast<double>(hits) / static_cast<double>(denom);
        });
}

double ndcg_at_k(const RankedLists& ranked, const InteractionMatrix& y, int k) {
    if (k < 1) throw ArgumentError("K must be >= 1");
    return mean_over_targeted_users(
        ranked, y, [&](const std::vector<int>& list, const std::vector<int>& target) {
            const std::size_t depth = std::min<std::size_t>(list.size(), static_cast<std::size_t>(k));
            double dcg = 0.0;
            for (std::size_t r = 0; r < depth; ++r) {
                if (std::binary_search(target.begin(), target.end(), list[r])) {
                    dcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
                }
            }
            const auto ideal = std::min<std::size_t>(static_cast<std::size_t>(k), target.size());
            double idcg = 0.0;
            for (std::size_t r = 0; r < ideal; ++r) {
                idcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
            }
            return dcg / idcg;
        });
}

RankingResult evaluate_ranking(const Matrix& w, const InteractionMatrix& x,
                               const InteractionMatrix& y, const std::vector<int>& ks,
                               bool exclude_input) {
    int max_k = 0;
    for (int k : ks) max_k = std::max(max_k, k);
    const RankedLists ranked =
        rank_predictions(w, x, exclude_input, static_cast<std::size_t>(max_k));

    RankingResult result;
    for (int u = 0; u < y.m(); ++u) {
        if (!y.items_of_user(u).empty()) ++result.users_evaluated;
    }
    for (int k : ks) {
        result.recall[k] = recall_at_k(ranked, y, k);
        result.ndcg[k] = ndcg_at_k(ranked, y, k);
    }
    return result;
}

}  // namespace laeb
