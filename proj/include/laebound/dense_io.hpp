#pragma once

#include <filesystem>

#include "laebound/common.hpp"

namespace laeb {

// Dense matrix persistence with a "rows cols" shape header.
// Text: header line then one row per line, %.17g values (lossless round trip).
// Binary: 8-byte magic "LAEBMAT1", two int64 dims, row-major doubles.
// save_dense/load_dense pick binary when the extension is ".bin".

void save_dense_text(const std::filesystem::path& path, const Matrix& m);
Matrix load_dense_text(const std::filesystem::path& path);

void save_dense_binary(const std::filesystem::path& path, const Matrix& m);
Matrix load_dense_binary(const std::filesystem::path& path);

void save_dense(const std::filesystem::path& path, const Matrix& m);
Matrix load_dense(const std::filesystem::path& path);

}  // namespace laeb
