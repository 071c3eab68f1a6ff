#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace conjtime {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Young diagram of an ample, equiregular geodesic.
///
/// Rows are stored longest first. Boxes are indexed row-major: row a
/// ascending, then box i ascending inside the row. Every matrix in this
/// library that is indexed by boxes uses that ordering.
class YoungDiagram {
 public:
  static constexpr int kMaxBoxes = 64;

  /// Throws std::invalid_argument on empty input, non-positive rows,
  /// increasing row lengths or more than kMaxBoxes boxes.
  explicit YoungDiagram(std::vector<int> row_lengths);

  /// Parses the compact form "2,1".
  static YoungDiagram parse(std::string_view text);
  /// n rows of length one.
  static YoungDiagram riemannian(int n);
  static YoungDiagram single_row(int length);

  const std::vector<int>& row_lengths() const { return rows_; }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int total_boxes() const { return total_; }
  int max_row_length() const { return rows_.front(); }

  /// Canonical index of box `box` (0-based) of row `row` (0-based).
  int index(int row, int box) const { return offsets_[row] + box; }

  std::string to_string() const;

  bool operator==(const YoungDiagram& other) const { return rows_ == other.rows_; }

 private:
  std::vector<int> rows_;
  std::vector<int> offsets_;
  int total_ = 0;
};

/// A maximal set of rows sharing the same length. Box i of every row in
/// the level forms the i-th superbox.
struct Level {
  int length = 0;
  int size = 0;
  std::vector<int> rows;

  /// Canonical indices of the boxes in superbox `i` (0-based).
  std::vector<int> superbox(const YoungDiagram& diagram, int i) const;
};

std::vector<Level> levels_and_superboxes(const YoungDiagram& diagram);

struct StructuralMatrices {
  Matrix gamma1;
  Matrix gamma2;

  int dimension() const { return static_cast<int>(gamma1.rows()); }
};

/// Block-diagonal Gamma_1 (shift inside each row) and Gamma_2 (projection on
/// the first box of each row).
StructuralMatrices build_structural_matrices(const YoungDiagram& diagram);

/// Rank test of [G2; G2 G1; ...; G2 G1^(n-1)].
bool is_controllable(const StructuralMatrices& s);

/// Ricci curvatures of a level: entry i is the sum of R's diagonal over
/// superbox i. Throws std::invalid_argument on dimension mismatch.
std::vector<double> partial_trace_ricci(const Matrix& r, const YoungDiagram& diagram,
                                        const Level& level);

}  // namespace conjtime
