#include "laebound/config.hpp"

#include <fstream>
#include <sstream>

#include "laebound/rng.hpp"

namespace laeb {

std::uint64_t ExperimentConfig::split_seed() const { return hash_combine(seed, 0xA11CE); }
std::uint64_t ExperimentConfig::mask_seed() const { return hash_combine(seed, 0xB0B); }

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream stream(value);
    std::string item;
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ArgumentError("config key '" + key + "': cannot parse number '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ArgumentError("config key '" + key + "': cannot parse integer '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ArgumentError("config key '" + key + "': cannot parse boolean '" + value + "'");
}

}  // namespace

void apply_config_line(ExperimentConfig& config, const std::string& raw_key,
                       const std::string& raw_value) {
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    if (key == "dataset") {
        config.dataset = value;
    } else if (key == "delimiter") {
        if (value == "tab" || value == "\\t") config.delimiter = '\t';
        else if (value.size() == 1) config.delimiter = value[0];
        else throw ArgumentError("config key 'delimiter': expected one character or 'tab'");
    } else if (key == "skip_lines") {
        config.skip_lines = static_cast<int>(parse_int(key, value));
    } else if (key == "test_fraction") {
        config.test_fraction = parse_double(key, value);
    } else if (key == "p") {
        config.p = parse_double(key, value);
    } else if (key == "gamma") {
        config.gamma.clear();
        for (const std::string& item : split_list(value)) {
            config.gamma.push_back(parse_double(key, item));
        }
    } else if (key == "sigma") {
        config.sigma = parse_double(key, value);
    } else if (key == "delta") {
        config.delta = parse_double(key, value);
    } else if (key == "lambda") {
        config.lambda.clear();
        for (const std::string& item : split_list(value)) {
            config.lambda.push_back(parse_double(key, item));
        }
    } else if (key == "seed") {
        config.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "jitter") {
        config.jitter = parse_double(key, value);
    } else if (key == "metric_ks") {
        config.metric_ks.clear();
        for (const std::string& item : split_list(value)) {
            config.metric_ks.push_back(static_cast<int>(parse_int(key, item)));
        }
    } else if (key == "output_dir") {
        config.output_dir = value;
    } else if (key == "sigma_hh_source") {
        if (value == "whole") config.sigma_hh_source = SigmaHhSource::whole;
        else if (value == "train") config.sigma_hh_source = SigmaHhSource::train;
        else if (value == "file") config.sigma_hh_source = SigmaHhSource::file;
        else throw ArgumentError("config key 'sigma_hh_source': expected whole|train|file");
    } else if (key == "sigma_hh_file") {
        config.sigma_hh_file = value;
    } else if (key == "zero_diag") {
        config.zero_diag = parse_bool(key, value);
    } else if (key == "min_user_interactions") {
        config.min_user_interactions = static_cast<int>(parse_int(key, value));
    } else if (key == "min_item_interactions") {
        config.min_item_interactions = static_cast<int>(parse_int(key, value));
    } else if (key == "workers") {
        config.workers = static_cast<int>(parse_int(key, value));
    } else {
        throw ArgumentError("unknown config key '" + key + "'");
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open config file: " + path.string());
    ExperimentConfig config;
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("config line " + std::to_string(line_no) +
                                 " is not 'key = value'",
                             line_no);
        }
        apply_config_line(config, line.substr(0, eq), line.substr(eq + 1));
    }
    return config;
}

std::string config_to_string(const ExperimentConfig& config) {
    std::ostringstream out;
    out << "dataset = " << config.dataset.string() << "\n";
    out << "delimiter = " << (config.delimiter == '\t' ? std::string("tab")
                                                       : std::string(1, config.delimiter))
        << "\n";
    out << "skip_lines = " << config.skip_lines << "\n";
    out << "test_fraction = " << config.test_fraction << "\n";
    out << "p = " << config.p << "\n";
    out << "gamma = ";
    for (std::size_t i = 0; i < config.gamma.size(); ++i) {
        out << (i ? "," : "") << config.gamma[i];
    }
    out << "\n";
    out << "sigma = " << config.sigma << "\n";
    out << "delta = " << config.delta << "\n";
    out << "lambda = ";
    for (std::size_t i = 0; i < config.lambda.size(); ++i) {
        out << (i ? "," : "") << config.lambda[i];
    }
    out << "\n";
    out << "seed = " << config.seed << "\n";
    if (config.jitter) out << "jitter = " << *config.jitter << "\n";
    out << "metric_ks = ";
    for (std::size_t i = 0; i < config.metric_ks.size(); ++i) {
        out << (i ? "," : "") << config.metric_ks[i];
    }
    out << "\n";
    out << "output_dir = " << config.output_dir.string() << "\n";
    out << "sigma_hh_source = "
        << (config.sigma_hh_source == SigmaHhSource::whole   ? "whole"
            : config.sigma_hh_source == SigmaHhSource::train ? "train"
                                                             : "file")
        << "\n";
    if (!config.sigma_hh_file.empty()) {
        out << "sigma_hh_file = " << config.sigma_hh_file.string() << "\n";
    }
    out << "zero_diag = " << (config.zero_diag ? "true" : "false") << "\n";
    out << "min_user_interactions = " << config.min_user_interactions << "\n";
    out << "min_item_interactions = " << config.min_item_interactions << "\n";
    out << "workers = " << config.workers << "\n";
    return out.str();
}

}  // namespace laeb
