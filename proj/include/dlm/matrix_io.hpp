#pragma once

#include <Eigen/Core>

#include <string>

namespace dlm {

/// Writes `content` to `path` atomically (temp file + rename).
void write_text_atomic(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

// Portable binary matrix container: 8 magic bytes "DLMMAT01", little-endian
// uint64 rows and cols, then row-major 64-bit floats.
void save_matrix(const std::string& path, const Eigen::MatrixXd& matrix);
Eigen::MatrixXd load_matrix(const std::string& path);

} // namespace dlm
