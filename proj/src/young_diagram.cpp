#include "conjtime/young_diagram.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace conjtime {

YoungDiagram::YoungDiagram(std::vector<int> row_lengths) : rows_(std::move(row_lengths)) {
  if (rows_.empty()) {
    throw std::invalid_argument("Young diagram needs at least one row");
  }
  for (std::size_t a = 0; a < rows_.size(); ++a) {
    if (rows_[a] <= 0) {
      throw std::invalid_argument("Young diagram rows must have positive length");
    }
    if (a > 0 && rows_[a] > rows_[a - 1]) {
      throw std::invalid_argument("Young diagram row lengths must be non-increasing");
    }
  }
  total_ = std::accumulate(rows_.begin(), rows_.end(), 0);
  if (total_ > kMaxBoxes) {
    throw std::invalid_argument("Young diagram exceeds " + std::to_string(kMaxBoxes) +
                                " boxes");
  }
  offsets_.resize(rows_.size());
  std::exclusive_scan(rows_.begin(), rows_.end(), offsets_.begin(), 0);
}

YoungDiagram YoungDiagram::parse(std::string_view text) {
  std::vector<int> rows;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view token = text.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    int value = 0;
    auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || end != token.data() + token.size()) {
      throw std::invalid_argument("cannot parse Young diagram '" + std::string(text) + "'");
    }
    rows.push_back(value);
    pos = comma + 1;
  }
  return YoungDiagram(std::move(rows));
}

YoungDiagram YoungDiagram::riemannian(int n) { return YoungDiagram(std::vector<int>(n, 1)); }

YoungDiagram YoungDiagram::single_row(int length) { return YoungDiagram({length}); }

std::string YoungDiagram::to_string() const {
  std::string out;
  for (std::size_t a = 0; a < rows_.size(); ++a) {
    if (a > 0) out += ',';
    out += std::to_string(rows_[a]);
  }
  return out;
}

std::vector<int> Level::superbox(const YoungDiagram& diagram, int i) const {
  std::vector<int> boxes;
  boxes.reserve(rows.size());
  for (int a : rows) boxes.push_back(diagram.index(a, i));
  return boxes;
}

std::vector<Level> levels_and_superboxes(const YoungDiagram& diagram) {
  std::vector<Level> levels;
  const auto& rows = diagram.row_lengths();
  for (int a = 0; a < diagram.num_rows(); ++a) {
    if (levels.empty() || levels.back().length != rows[a]) {
      levels.push_back(Level{rows[a], 0, {}});
    }
    levels.back().rows.push_back(a);
    levels.back().size += 1;
  }
  return levels;
}

StructuralMatrices build_structural_matrices(const YoungDiagram& diagram) {
  const int n = diagram.total_boxes();
  StructuralMatrices s{Matrix::Zero(n, n), Matrix::Zero(n, n)};
  for (int a = 0; a < diagram.num_rows(); ++a) {
    const int len = diagram.row_lengths()[a];
    const int first = diagram.index(a, 0);
    s.gamma2(first, first) = 1.0;
    for (int i = 0; i + 1 < len; ++i) {
      s.gamma1(first + i, first + i + 1) = 1.0;
    }
  }
  return s;
}

bool is_controllable(const StructuralMatrices& s) {
  const int n = s.dimension();
  Matrix stacked(n * n, n);
  Matrix block = s.gamma2;
  for (int k = 0; k < n; ++k) {
    stacked.middleRows(k * n, n) = block;
    block = block * s.gamma1;
  }
  Eigen::FullPivLU<Matrix> lu(stacked);
  return lu.rank() == n;
}

std::vector<double> partial_trace_ricci(const Matrix& r, const YoungDiagram& diagram,
                                        const Level& level) {
  const int n = diagram.total_boxes();
  if (r.rows() != n || r.cols() != n) {
    throw std::invalid_argument("curvature matrix size does not match the Young diagram");
  }
  for (int a : level.rows) {
    if (a < 0 || a >= diagram.num_rows() || diagram.row_lengths()[a] != level.length) {
      throw std::invalid_argument("level does not belong to the Young diagram");
    }
  }
  std::vector<double> ricci(level.length, 0.0);
  for (int i = 0; i < level.length; ++i) {
    for (int idx : level.superbox(diagram, i)) ricci[i] += r(idx, idx);
  }
  return ricci;
}

}  // namespace conjtime
