#include "sympopt/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sympopt {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error("matrix json: " + what);
}

}  // namespace

std::string matrix_to_json(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 2 || m.rows() % 2 != 0)
    fail("only even-sized square matrices are serializable");
  const long d = m.rows();
  std::ostringstream out;
  out << "{\"n\": " << d / 2 << ", \"rows\": [";
  for (long i = 0; i < d; ++i) {
    out << (i ? ", [" : "[");
    for (long j = 0; j < d; ++j) {
      if (j) out << ", ";
      out << format_double(m(i, j));
    }
    out << "]";
  }
  out << "]}";
  return out.str();
}

void write_matrix_json(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) fail("cannot open " + path.string() + " for writing");
  out << matrix_to_json(m) << "\n";
}

Eigen::MatrixXd matrix_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(e.what());
  }
  if (!j.is_object()) fail("top level must be an object");
  for (const auto& [key, value] : j.items())
    if (key != "n" && key != "rows") fail("unknown key \"" + key + "\"");
  if (!j.contains("n") || !j["n"].is_number_integer()) fail("missing integer key \"n\"");
  if (!j.contains("rows") || !j["rows"].is_array()) fail("missing array key \"rows\"");
  const int n = j["n"].get<int>();
  if (n < 1) fail("\"n\" must be >= 1");
  const int d = 2 * n;
  const auto& rows = j["rows"];
  if (static_cast<int>(rows.size()) != d)
    fail("expected " + std::to_string(d) + " rows, got " + std::to_string(rows.size()));
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      fail("row " + std::to_string(i) + " must hold " + std::to_string(d) + " numbers");
    for (int k = 0; k < d; ++k) {
      if (!row[k].is_number()) fail("entry (" + std::to_string(i) + ", " + std::to_string(k) +
                                    ") is not a number");
      m(i, k) = row[k].get<double>();
    }
  }
  return m;
}

Eigen::MatrixXd read_matrix_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string() + " for reading");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return matrix_from_json_text(buffer.str());
}

}  // namespace sympopt
