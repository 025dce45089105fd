#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

namespace adg {

/// Symmetric sparse matrix. Each unordered index pair is stored once
/// (upper triangle, row <= col), so the matrix is symmetric by construction.
///
/// Usage: add() triplets in any order, then finalize() once; matvec and
/// queries are only valid afterwards. Accumulation during finalize happens
/// in insertion order, which keeps assembly results deterministic.
class SparseSymMatrix {
 public:
  explicit SparseSymMatrix(int dimension) : n_(dimension) {}

  int dim() const { return n_; }

  /// Adds v to logical entries (i,j) and (j,i).
  void add(int i, int j, double v);

  void finalize();
  bool finalized() const { return finalized_; }

  /// y = A x (full symmetric product).
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;

  /// x^T A x.
  double quadratic_form(const std::vector<double>& x) const;

  /// x^T A y.
  double bilinear_form(const std::vector<double>& x, const std::vector<double>& y) const;

  std::vector<double> diagonal() const;

  /// Visits every stored entry (i <= j) in ascending (i, j) order.
  void for_each_upper(const std::function<void(int, int, double)>& fn) const;

  int n_stored() const { return static_cast<int>(values_.size()); }

 private:
  int n_ = 0;
  bool finalized_ = false;
  struct Triplet {
    int row, col;
    double value;
  };
  std::vector<Triplet> pending_;
  // CSR over the upper triangle after finalize().
  std::vector<int> row_ptr_, col_;
  std::vector<double> values_;
};

/// Coordinate text format, one "row col value" per line, full symmetric
/// expansion, sorted by (row, col). 0-based indices.
void write_matrix_coordinate(const SparseSymMatrix& A, std::ostream& out);

}  // namespace adg
