#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>

namespace sympopt {

// Serializes a 2n x 2n matrix as {"n": n, "rows": [[...], ...]} row-major,
// every entry printed with 17 significant digits so parsing round-trips
// bit-exactly.
std::string matrix_to_json(const Eigen::MatrixXd& m);

void write_matrix_json(const std::filesystem::path& path, const Eigen::MatrixXd& m);

// Strict parse of the matrix object: exactly the keys {"n", "rows"}, 2n rows
// of 2n numbers each. Throws std::runtime_error with a diagnostic.
Eigen::MatrixXd matrix_from_json_text(const std::string& text);

Eigen::MatrixXd read_matrix_json(const std::filesystem::path& path);

}  // namespace sympopt
