#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "laebound/common.hpp"

namespace laeb {

/// Sparse binary item x user matrix. Stored entries are 1, absent entries 0.
class InteractionMatrix {
  public:
    InteractionMatrix() = default;
    InteractionMatrix(int n_items, int n_users)
        : n_(n_items), m_(n_users), user_items_(static_cast<std::size_t>(n_users)) {}

    static InteractionMatrix from_coords(
        int n_items, int n_users,
        const std::vector<std::pair<int, int>>& item_user_coords);

    int n() const { return n_; }  // items
    int m() const { return m_; }  // users
    long long nnz() const { return nnz_; }

    const std::vector<int>& items_of_user(int user) const {
        return user_items_[static_cast<std::size_t>(user)];
    }

    bool contains(int item, int user) const;

    // Inserts (item, user); duplicate inserts are no-ops.
    void insert(int item, int user);

    template <typename Fn>
    void for_each_entry(Fn&& fn) const {
        for (int u = 0; u < m_; ++u) {
            for (int i : user_items_[static_cast<std::size_t>(u)]) fn(i, u);
        }
    }

    Matrix to_dense() const;

    bool operator==(const InteractionMatrix& other) const {
        return n_ == other.n_ && m_ == other.m_ && user_items_ == other.user_items_;
    }

  private:
    int n_ = 0;
    int m_ = 0;
    long long nnz_ = 0;
    std::vector<std::vector<int>> user_items_;  // sorted ascending per user
};

struct HoldoutSplit {
    InteractionMatrix x;  // input, retained fraction p
    InteractionMatrix y;  // target, held-out fraction 1-p
    double p = 0.0;
    std::uint64_t seed = 0;
};

struct LoadFormat {
    char delimiter = ',';
    int skip_lines = 0;  // header lines to ignore
};

struct LoadResult {
    InteractionMatrix matrix;
    // Dense re-index in first-appearance order; position k holds the raw id
    // token that was mapped to index k.
    std::vector<std::string> user_ids;
    std::vector<std::string> item_ids;
    long long raw_records = 0;
    long long duplicate_records = 0;
};

LoadResult load_interactions(const std::filesystem::path& path,
                             const LoadFormat& format = {});

std::pair<InteractionMatrix, InteractionMatrix> strong_split(
    const InteractionMatrix& h_whole, double test_fraction, std::uint64_t seed);

HoldoutSplit holdout_mask(const InteractionMatrix& h, double p, std::uint64_t seed);

Matrix population_correlation(const InteractionMatrix& h_whole);

// Internal sparse exchange format: "n m" header, then sorted "i j" lines.
void save_interactions(const std::filesystem::path& path, const InteractionMatrix& h);
InteractionMatrix load_interactions_internal(const std::filesystem::path& path);

}  // namespace laeb
