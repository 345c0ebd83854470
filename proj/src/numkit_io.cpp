#include "oalab/numkit.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace oalab::numkit {

namespace {

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    out.push_back(v);
  }
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const CMat& m) {
  out << m.rows() << ',' << m.cols() << '\n';
  const auto old = out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j).real() << ',' << m(i, j).imag();
    }
    out << '\n';
  }
  out.precision(old);
}

CMat read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_csv: missing header");
  const auto header = split_numbers(line);
  if (header.size() != 2 || header[0] < 0 || header[1] < 0) {
    throw std::runtime_error("read_csv: header must be 'rows,cols'");
  }
  const auto rows = static_cast<Eigen::Index>(header[0]);
  const auto cols = static_cast<Eigen::Index>(header[1]);
  CMat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("read_csv: truncated matrix");
    const auto fields = split_numbers(line);
    if (static_cast<Eigen::Index>(fields.size()) != 2 * cols) {
      throw std::runtime_error("read_csv: row " + std::to_string(i) + " has wrong field count");
    }
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(fields[2 * j], fields[2 * j + 1]);
  }
  return m;
}

}  // namespace oalab::numkit
