#include "laebound/dense_io.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace laeb {

namespace {
constexpr std::array<char, 8> kMagic = {'L', 'A', 'E', 'B', 'M', 'A', 'T', '1'};
}

void save_dense_text(const std::filesystem::path& path, const Matrix& m) {
    std::FILE* out = std::fopen(path.string().c_str(), "w");
    if (!out) throw ArgumentError("cannot write matrix file: " + path.string());
    std::fprintf(out, "%lld %lld\n", static_cast<long long>(m.rows()),
                 static_cast<long long>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::fprintf(out, j == 0 ? "%.17g" : " %.17g", m(i, j));
        }
        std::fputc('\n', out);
    }
    std::fclose(out);
}

Matrix load_dense_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open matrix file: " + path.string());
    long long rows = 0;
    long long cols = 0;
    if (!(in >> rows >> cols) || rows < 0 || cols < 0) {
        throw ParseError("missing 'rows cols' shape header in " + path.string(), 1);
    }
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!(in >> m(i, j))) {
                throw ParseError("matrix file truncated: " + path.string(),
                                 static_cast<long long>(i) + 2);
            }
        }
    }
    return m;
}

void save_dense_binary(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot write matrix file: " + path.string());
    out.write(kMagic.data(), kMagic.size());
    const std::int64_t dims[2] = {m.rows(), m.cols()};
    out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(double)));
    }
    if (!out) throw NumericalError("short write to " + path.string());
}

Matrix load_dense_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open matrix file: " + path.string());
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || std::memcmp(magic.data(), kMagic.data(), magic.size()) != 0) {
        throw ParseError("bad magic in matrix file " + path.string(), 0);
    }
    std::int64_t dims[2] = {0, 0};
    in.read(reinterpret_cast<char*>(dims), sizeof(dims));
    if (!in || dims[0] < 0 || dims[1] < 0) {
        throw ParseError("bad shape in matrix file " + path.string(), 0);
    }
    Matrix m(dims[0], dims[1]);
    std::vector<double> row(static_cast<std::size_t>(dims[1]));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        in.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(double)));
        if (!in) throw ParseError("matrix file truncated: " + path.string(), 0);
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = row[static_cast<std::size_t>(j)];
    }
    return m;
}

void save_dense(const std::filesystem::path& path, const Matrix& m) {
    if (path.extension() == ".bin") {
        save_dense_binary(path, m);
    } else {
        save_dense_text(path, m);
    }
}

Matrix load_dense(const std::filesystem::path& path) {
    if (path.extension() == ".bin") return load_dense_binary(path);
    return load_dense_text(path);
}

}  // namespace laeb
