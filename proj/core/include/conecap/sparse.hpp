#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace conecap {

/// Compressed sparse row matrix. Assembled from triplets; duplicate entries
/// are summed. Column indices within a row are sorted.
struct CsrMatrix {
  std::size_t rows = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> col;
  std::vector<double> val;

  static CsrMatrix from_triplets(std::size_t n,
                                 std::vector<std::size_t>& rows,
                                 std::vector<std::size_t>& cols,
                                 std::vector<double>& vals);

  void multiply(std::span<const double> x, std::span<double> y) const;
};

/// Zero-fill incomplete Cholesky preconditioner for symmetric positive
/// definite matrices. Falls back to a shifted factorization when a pivot
/// degenerates; the shift sequence is deterministic.
class IncompleteCholesky {
 public:
  void factor(const CsrMatrix& a);
  void apply(std::span<const double> r, std::span<double> z) const;
  double shift_used() const { return shift_; }

 private:
  bool try_factor(const CsrMatrix& a, double shift);

  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_, col_;
  std::vector<double> val_;   // lower triangle, diagonal last per row
  std::vector<double> diag_;  // of the factor
  double shift_ = 0.0;
  mutable std::vector<double> work_;
};

struct PcgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Preconditioned conjugate gradients. x holds the initial guess on entry
/// and the solution on exit.
PcgResult pcg_solve(const CsrMatrix& a, const IncompleteCholesky& prec,
                    std::span<const double> b, std::span<double> x,
                    double rel_tol, int max_iter);

}  // namespace conecap
