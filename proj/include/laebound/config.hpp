#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "laebound/common.hpp"

namespace laeb {

enum class SigmaHhSource { whole, train, file };

/// Experiment configuration. Defaults mirror the standard protocol:
/// 30% test users, hold-out retention 1/2, the seven gamma values,
/// sigma = 0.001, delta = 0.01, lambda grid 1..512 in powers of two.
struct ExperimentConfig {
    std::filesystem::path dataset;
    char delimiter = ',';
    int skip_lines = 0;
    double test_fraction = 0.3;
    double p = 0.5;
    std::vector<double> gamma = {50, 100, 200, 500, 1000, 2000, 5000};
    double sigma = 0.001;
    double delta = 0.01;
    std::vector<double> lambda = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512};
    std::uint64_t seed = 1;
    std::optional<double> jitter;
    std::vector<int> metric_ks = {50, 100};
    std::filesystem::path output_dir = "out";
    SigmaHhSource sigma_hh_source = SigmaHhSource::whole;
    std::filesystem::path sigma_hh_file;
    bool zero_diag = true;
    int min_user_interactions = 0;  // optional activity filters, off by default
    int min_item_interactions = 0;
    int workers = 0;  // 0 = hardware concurrency (LAEBOUND_WORKERS overrides)

    // Derived seeds keep the split and the mask independent.
    std::uint64_t split_seed() const;
    std::uint64_t mask_seed() const;
};

// key = value lines; '#' starts a comment; lists are comma-separated.
// Unknown keys are an error. Keys match the field names above.
ExperimentConfig load_config(const std::filesystem::path& path);
void apply_config_line(ExperimentConfig& config, const std::string& key,
                       const std::string& value);

std::string config_to_string(const ExperimentConfig& config);

}  // namespace laeb
