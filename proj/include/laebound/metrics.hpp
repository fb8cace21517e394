#pragma once

#include <map>
#include <vector>

#include "laebound/common.hpp"
#include "laebound/interactions.hpp"

namespace laeb {

/// Per-user item rankings, best first. Ties break by ascending item index.
struct RankedLists {
    std::vector<std::vector<int>> items;
};

// Scores every item as (W x_u) per user and sorts descending. Input items are
// removed first when exclude_input. top_k = 0 keeps the full ranking.
RankedLists rank_predictions(const Matrix& w, const InteractionMatrix& x,
                             bool exclude_input, std::size_t top_k = 0);

// Mean over users with a nonempty target of |top-K hits| / min(K, |target|).
double recall_at_k(const RankedLists& ranked, const InteractionMatrix& y, int k);

// Binary-relevance NDCG: DCG@K / IDCG@K averaged over users with a nonempty
// target.
double ndcg_at_k(const RankedLists& ranked, const InteractionMatrix& y, int k);

struct RankingResult {
    std::map<int, double> recall;
    std::map<int, double> ndcg;
    long long users_evaluated = 0;
};

RankingResult evaluate_ranking(const Matrix& w, const InteractionMatrix& x,
                               const InteractionMatrix& y, const std::vector<int>& ks,
                               bool exclude_input = true);

}  // namespace laeb
