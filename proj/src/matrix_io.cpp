#include "dlm/matrix_io.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dlm/errors.hpp"

namespace dlm {

namespace {
constexpr char kMagic[8] = {'D', 'L', 'M', 'M', 'A', 'T', '0', '1'};

void put_u64(std::string& out, std::uint64_t value) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const char* data) {
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i)
        value |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[i])) << (8 * i);
    return value;
}
} // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(Err::IoError, "cannot open " + tmp + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) raise(Err::IoError, "write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) raise(Err::IoError, "cannot rename " + tmp + " to " + path + ": " + ec.message());
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Err::IoError, "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void save_matrix(const std::string& path, const Eigen::MatrixXd& matrix) {
    std::string blob;
    blob.reserve(24 + static_cast<std::size_t>(matrix.size()) * 8);
    blob.append(kMagic, sizeof(kMagic));
    put_u64(blob, static_cast<std::uint64_t>(matrix.rows()));
    put_u64(blob, static_cast<std::uint64_t>(matrix.cols()));
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            double value = matrix(i, j);
            char bytes[8];
            std::memcpy(bytes, &value, 8);
            blob.append(bytes, 8);
        }
    }
    write_text_atomic(path, blob);
}

Eigen::MatrixXd load_matrix(const std::string& path) {
    std::string blob = read_text_file(path);
    if (blob.size() < 24 || std::memcmp(blob.data(), kMagic, sizeof(kMagic)) != 0)
        raise(Err::IoError, path + " is not a matrix container");
    std::uint64_t rows = get_u64(blob.data() + 8);
    std::uint64_t cols = get_u64(blob.data() + 16);
    if (blob.size() != 24 + rows * cols * 8)
        raise(Err::IoError, path + " has a truncated payload");
    Eigen::MatrixXd matrix(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    const char* cursor = blob.data() + 24;
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            double value;
            std::memcpy(&value, cursor, 8);
            matrix(i, j) = value;
            cursor += 8;
        }
    }
    return matrix;
}

} // namespace dlm
