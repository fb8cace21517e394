#pragma once

#include <filesystem>
#include <string>

#include "laebound/lae_bound.hpp"

namespace laeb {

// Human-readable table: one row per lambda with the RH component breakdown.
std::string bound_report_text(const BoundReport& report);

// Machine-readable variant with the exact field names of the grid records.
std::string bound_report_json(const BoundReport& report);

void write_bound_report(const std::filesystem::path& text_path,
                        const std::filesystem::path& json_path,
                        const BoundReport& report);

}  // namespace laeb
