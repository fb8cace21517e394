#include "laebound/interactions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "laebound/rng.hpp"

namespace laeb {

InteractionMatrix InteractionMatrix::from_coords(
    int n_items, int n_users, const std::vector<std::pair<int, int>>& item_user_coords) {
    InteractionMatrix out(n_items, n_users);
    for (const auto& [i, u] : item_user_coords) {
        if (i < 0 || i >= n_items || u < 0 || u >= n_users) {
            std::ostringstream msg;
            msg << "interaction coordinate (" << i << ", " << u << ") outside "
                << n_items << "x" << n_users;
            throw ArgumentError(msg.str());
        }
        out.insert(i, u);
    }
    return out;
}

bool InteractionMatrix::contains(int item, int user) const {
    const auto& items = user_items_[static_cast<std::size_t>(user)];
    return std::binary_search(items.begin(), items.end(), item);
}

void InteractionMatrix::insert(int item, int user) {
    auto& items = user_items_[static_cast<std::size_t>(user)];
    auto it = std::lower_bound(items.begin(), items.end(), item);
    if (it != items.end() && *it == item) return;
    items.insert(it, item);
    ++nnz_;
}

Matrix InteractionMatrix::to_dense() const {
    Matrix out = Matrix::Zero(n_, m_);
    for_each_entry([&](int i, int u) { out(i, u) = 1.0; });
    return out;
}

LoadResult load_interactions(const std::filesystem::path& path, const LoadFormat& format) {
    std::ifstream in(path);
    if (!in) {
        throw ArgumentError("cannot open interactions file: " + path.string());
    }

    LoadResult result;
    std::unordered_map<std::string, int> user_index;
    std::unordered_map<std::string, int> item_index;
    std::vector<std::pair<int, int>> coords;  // (item, user)

    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no <= format.skip_lines) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const auto cut = line.find(format.delimiter);
        if (cut == std::string::npos) {
            throw ParseError("missing delimiter '" + std::string(1, format.delimiter) +
                                 "' at line " + std::to_string(line_no),
                             line_no);
        }
        std::string user_tok = line.substr(0, cut);
        std::string rest = line.substr(cut + 1);
        // Extra trailing fields (ratings, timestamps) are ignored.
        const auto next = rest.find(format.delimiter);
        std::string item_tok = next == std::string::npos ? rest : rest.substr(0, next);
        auto trim = [](std::string& s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            s = a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        trim(user_tok);
        trim(item_tok);
        if (user_tok.empty() || item_tok.empty()) {
            throw ParseError("empty user or item field at line " + std::to_string(line_no),
                             line_no);
        }

        auto [uit, unew] = user_index.try_emplace(user_tok, static_cast<int>(result.user_ids.size()));
        if (unew) result.user_ids.push_back(user_tok);
        auto [iit, inew] = item_index.try_emplace(item_tok, static_cast<int>(result.item_ids.size()));
        if (inew) result.item_ids.push_back(item_tok);
        coords.emplace_back(iit->second, uit->second);
        ++result.raw_records;
    }

    if (coords.empty()) {
        throw EmptyDatasetError("no interactions found in " + path.string());
    }

    result.matrix = InteractionMatrix::from_coords(
        static_cast<int>(result.item_ids.size()),
        static_cast<int>(result.user_ids.size()), coords);
    result.duplicate_records = result.raw_records - result.matrix.nnz();
    return result;
}

std::pair<InteractionMatrix, InteractionMatrix> strong_split(
    const InteractionMatrix& h_whole, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ArgumentError("test_fraction must lie in (0, 1)");
    }
    const int m = h_whole.m();
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    RngStream rng(seed, /*stream=*/1);
    for (int i = m - 1; i > 0; --i) {
        const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }

    const int train_users = static_cast<int>(std::ceil((1.0 - test_fraction) * m));
    std::vector<char> in_train(static_cast<std::size_t>(m), 0);
    for (int k = 0; k < train_users; ++k) in_train[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = 1;

    // Users keep their original relative order on both sides.
    InteractionMatrix train(h_whole.n(), train_users);
    InteractionMatrix test(h_whole.n(), m - train_users);
    int next_train = 0;
    int next_test = 0;
    for (int u = 0; u < m; ++u) {
        if (in_train[static_cast<std::size_t>(u)]) {
            for (int i : h_whole.items_of_user(u)) train.insert(i, next_train);
            ++next_train;
        } else {
            for (int i : h_whole.items_of_user(u)) test.insert(i, next_test);
            ++next_test;
        }
    }
    return {std::move(train), std::move(test)};
}

HoldoutSplit holdout_mask(const InteractionMatrix& h, double p, std::uint64_t seed) {
    if (!(p > 0.0 && p < 1.0)) {
        throw ArgumentError("hold-out retention p must lie in (0, 1)");
    }
    HoldoutSplit split;
    split.x = InteractionMatrix(h.n(), h.m());
    split.y = InteractionMatrix(h.n(), h.m());
    split.p = p;
    split.seed = seed;
    h.for_each_entry([&](int i, int u) {
        if (entry_uniform(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(u)) < p) {
            split.x.insert(i, u);
        } else {
            split.y.insert(i, u);
        }
    });
    return split;
}

Matrix population_correlation(const InteractionMatrix& h_whole) {
    if (h_whole.m() < 1) {
        throw ArgumentError("population_correlation needs at least one user");
    }
    const int n = h_whole.n();
    Matrix gram = Matrix::Zero(n, n);
    for (int u = 0; u < h_whole.m(); ++u) {
        const auto& items = h_whole.items_of_user(u);
        for (std::size_t a = 0; a < items.size(); ++a) {
            for (std::size_t b = a; b < items.size(); ++b) {
                gram(items[a], items[b]) += 1.0;
            }
        }
    }
    gram /= static_cast<double>(h_whole.m());
    Matrix full = gram.selfadjointView<Eigen::Upper>();
    return full;
}

void save_interactions(const std::filesystem::path& path, const InteractionMatrix& h) {
    std::ofstream out(path);
    if (!out) {
        throw ArgumentError("cannot write interactions file: " + path.string());
    }
    out << h.n() << ' ' << h.m() << '\n';
    std::vector<std::pair<int, int>> coords;
    coords.reserve(static_cast<std::size_t>(h.nnz()));
    h.for_each_entry([&](int i, int u) { coords.emplace_back(i, u); });
    std::sort(coords.begin(), coords.end());
    for (const auto& [i, u] : coords) out << i << ' ' << u << '\n';
}

InteractionMatrix load_interactions_internal(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ArgumentError("cannot open interactions file: " + path.string());
    }
    int n = 0;
    int m = 0;
    if (!(in >> n >> m)) {
        throw ParseError("missing 'n m' shape header in " + path.string(), 1);
    }
    InteractionMatrix out(n, m);
    int i = 0;
    int u = 0;
    long long line = 1;
    while (in >> i >> u) {
        ++line;
        if (i < 0 || i >= n || u < 0 || u >= m) {
            throw ParseError("coordinate out of bounds in " + path.string(), line);
        }
        out.insert(i, u);
    }
    return out;
}

}  // namespace laeb
