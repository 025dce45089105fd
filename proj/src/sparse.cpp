#include "adg/sparse.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <stdexcept>

namespace adg {

void SparseSymMatrix::add(int i, int j, double v) {
  if (finalized_) throw std::logic_error("SparseSymMatrix: add after finalize");
  if (i < 0 || j < 0 || i >= n_ || j >= n_)
    throw std::out_of_range("SparseSymMatrix: index out of range");
  if (i > j) std::swap(i, j);
  pending_.push_back({i, j, v});
}

void SparseSymMatrix::finalize() {
  if (finalized_) return;
  // stable_sort keeps insertion order within each (i,j) group, so the
  // accumulated values do not depend on the sort implementation.
  std::stable_sort(pending_.begin(), pending_.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  row_ptr_.assign(static_cast<size_t>(n_) + 1, 0);
  col_.clear();
  values_.clear();
  size_t k = 0;
  for (int row = 0; row < n_; ++row) {
    row_ptr_[static_cast<size_t>(row)] = static_cast<int>(col_.size());
    while (k < pending_.size() && pending_[k].row == row) {
      const int c = pending_[k].col;
      double sum = 0.0;
      while (k < pending_.size() && pending_[k].row == row && pending_[k].col == c) {
        sum += pending_[k].value;
        ++k;
      }
      col_.push_back(c);
      values_.push_back(sum);
    }
  }
  row_ptr_[static_cast<size_t>(n_)] = static_cast<int>(col_.size());
  pending_.clear();
  pending_.shrink_to_fit();
  finalized_ = true;
}

void SparseSymMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  assert(finalized_);
  y.assign(static_cast<size_t>(n_), 0.0);
  for (int i = 0; i < n_; ++i) {
    double yi = 0.0;
    const double xi = x[static_cast<size_t>(i)];
    for (int k = row_ptr_[static_cast<size_t>(i)]; k < row_ptr_[static_cast<size_t>(i) + 1]; ++k) {
      const int j = col_[static_cast<size_t>(k)];
      const double v = values_[static_cast<size_t>(k)];
      yi += v * x[static_cast<size_t>(j)];
      if (j != i) y[static_cast<size_t>(j)] += v * xi;
    }
    y[static_cast<size_t>(i)] += yi;
  }
}

double SparseSymMatrix::quadratic_form(const std::vector<double>& x) const {
  return bilinear_form(x, x);
}

double SparseSymMatrix::bilinear_form(const std::vector<double>& x,
                                      const std::vector<double>& y) const {
  assert(finalized_);
  double sum = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int k = row_ptr_[static_cast<size_t>(i)]; k < row_ptr_[static_cast<size_t>(i) + 1]; ++k) {
      const int j = col_[static_cast<size_t>(k)];
      const double v = values_[static_cast<size_t>(k)];
      sum += v * x[static_cast<size_t>(i)] * y[static_cast<size_t>(j)];
      if (j != i) sum += v * x[static_cast<size_t>(j)] * y[static_cast<size_t>(i)];
    }
  }
  return sum;
}

std::vector<double> SparseSymMatrix::diagonal() const {
  assert(finalized_);
  std::vector<double> d(static_cast<size_t>(n_), 0.0);
  for (int i = 0; i < n_; ++i) {
    for (int k = row_ptr_[static_cast<size_t>(i)]; k < row_ptr_[static_cast<size_t>(i) + 1]; ++k) {
      if (col_[static_cast<size_t>(k)] == i) d[static_cast<size_t>(i)] = values_[static_cast<size_t>(k)];
    }
  }
  return d;
}

void SparseSymMatrix::for_each_upper(const std::function<void(int, int, double)>& fn) const {
  assert(finalized_);
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[static_cast<size_t>(i)]; k < row_ptr_[static_cast<size_t>(i) + 1]; ++k)
      fn(i, col_[static_cast<size_t>(k)], values_[static_cast<size_t>(k)]);
}

void write_matrix_coordinate(const SparseSymMatrix& A, std::ostream& out) {
  struct Entry {
    int row, col;
    double value;
  };
  std::vector<Entry> entries;
  A.for_each_upper([&](int i, int j, double v) {
    entries.push_back({i, j, v});
    if (i != j) entries.push_back({j, i, v});
  });
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  char buf[96];
  for (const Entry& e : entries) {
    std::snprintf(buf, sizeof buf, "%d %d %.17g\n", e.row, e.col, e.value);
    out << buf;
  }
}

}  // namespace adg
