#include "conecap/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace conecap {

CsrMatrix CsrMatrix::from_triplets(std::size_t n,
                                   std::vector<std::size_t>& rows,
                                   std::vector<std::size_t>& cols,
                                   std::vector<double>& vals) {
  const std::size_t nnz_in = vals.size();
  std::vector<std::size_t> order(nnz_in);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rows[a] != rows[b]) return rows[a] < rows[b];
    return cols[a] < cols[b];
  });

  CsrMatrix m;
  m.rows = n;
  m.row_ptr.assign(n + 1, 0);
  m.col.reserve(nnz_in);
  m.val.reserve(nnz_in);
  std::size_t prev_row = static_cast<std::size_t>(-1);
  std::size_t prev_col = static_cast<std::size_t>(-1);
  for (std::size_t t : order) {
    if (rows[t] == prev_row && cols[t] == prev_col) {
      m.val.back() += vals[t];
    } else {
      m.col.push_back(cols[t]);
      m.val.push_back(vals[t]);
      m.row_ptr[rows[t] + 1] += 1;
      prev_row = rows[t];
      prev_col = cols[t];
    }
  }
  for (std::size_t r = 0; r < n; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
  return m;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      acc += val[k] * x[col[k]];
    y[r] = acc;
  }
}

bool IncompleteCholesky::try_factor(const CsrMatrix& a, double shift) {
  const std::size_t n = a.rows;
  // extract lower triangle pattern (diagonal last per row)
  row_ptr_.assign(n + 1, 0);
  col_.clear();
  val_.clear();
  diag_.assign(n, 0.0);
  std::vector<double> adiag(n, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
      if (a.col[k] == r) adiag[r] = a.val[k];

  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      if (a.col[k] < r) {
        col_.push_back(a.col[k]);
        val_.push_back(a.val[k]);
      }
    }
    col_.push_back(r);
    val_.push_back(adiag[r] * (1.0 + shift));
    row_ptr_[r + 1] = col_.size();
  }

  // in-place IC(0): for each row, subtract contributions of previous rows
  // restricted to the fixed pattern.
  std::vector<std::size_t> head(n, 0);  // scratch for column lookup
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t rb = row_ptr_[r], re = row_ptr_[r + 1];
    for (std::size_t k = rb; k + 1 < re; ++k) {
      const std::size_t c = col_[k];
      // val[k] = (a_rc - sum_{j<c} L_rj L_cj) / L_cc
      double sum = val_[k];
      std::size_t pr = rb, pc = row_ptr_[c];
      const std::size_t pre = k, pce = row_ptr_[c + 1] - 1;
      while (pr < pre && pc < pce) {
        if (col_[pr] == col_[pc]) {
          sum -= val_[pr] * val_[pc];
          ++pr;
          ++pc;
        } else if (col_[pr] < col_[pc]) {
          ++pr;
        } else {
          ++pc;
        }
      }
      val_[k] = sum / diag_[c];
    }
    double d = val_[re - 1];
    for (std::size_t k = rb; k + 1 < re; ++k) d -= val_[k] * val_[k];
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    diag_[r] = std::sqrt(d);
    val_[re - 1] = diag_[r];
  }
  (void)head;
  return true;
}

void IncompleteCholesky::factor(const CsrMatrix& a) {
  n_ = a.rows;
  work_.assign(n_, 0.0);
  double shift = 0.0;
  for (int attempt = 0; attempt < 12; ++attempt) {
    if (try_factor(a, shift)) {
      shift_ = shift;
      return;
    }
    shift = (shift == 0.0) ? 1e-3 : shift * 4.0;
  }
  throw std::runtime_error("IncompleteCholesky: factorization failed");
}

void IncompleteCholesky::apply(std::span<const double> r,
                               std::span<double> z) const {
  // forward solve L y = r
  auto& y = work_;
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = r[i];
    const std::size_t rb = row_ptr_[i], re = row_ptr_[i + 1];
    for (std::size_t k = rb; k + 1 < re; ++k) acc -= val_[k] * y[col_[k]];
    y[i] = acc / diag_[i];
  }
  // backward solve L^T z = y
  for (std::size_t i = 0; i < n_; ++i) z[i] = y[i];
  for (std::size_t i = n_; i-- > 0;) {
    z[i] /= diag_[i];
    const std::size_t rb = row_ptr_[i], re = row_ptr_[i + 1];
    for (std::size_t k = rb; k + 1 < re; ++k) z[col_[k]] -= val_[k] * z[i];
  }
}

PcgResult pcg_solve(const CsrMatrix& a, const IncompleteCholesky& prec,
                    std::span<const double> b, std::span<double> x,
                    double rel_tol, int max_iter) {
  const std::size_t n = a.rows;
  std::vector<double> r(n), z(n), p(n), ap(n);

  a.multiply(x, ap);
  double bnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = b[i] - ap[i];
    bnorm += b[i] * b[i];
  }
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) bnorm = 1.0;

  prec.apply(r, z);
  double rz = 0.0, rnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rz += r[i] * z[i];
    rnorm += r[i] * r[i];
    p[i] = z[i];
  }
  rnorm = std::sqrt(rnorm);

  PcgResult out;
  out.relative_residual = rnorm / bnorm;
  if (out.relative_residual <= rel_tol) {
    out.converged = true;
    return out;
  }

  for (int it = 0; it < max_iter; ++it) {
    a.multiply(p, ap);
    double pap = 0.0;
    for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
    if (!(pap > 0.0)) break;  // matrix lost definiteness
    const double alpha = rz / pap;
    rnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
      rnorm += r[i] * r[i];
    }
    rnorm = std::sqrt(rnorm);
    out.iterations = it + 1;
    out.relative_residual = rnorm / bnorm;
    if (out.relative_residual <= rel_tol) {
      out.converged = true;
      return out;
    }
    prec.apply(r, z);
    double rz_new = 0.0;
    for (std::size_t i = 0; i < n; ++i) rz_new += r[i] * z[i];
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return out;
}

}  // namespace conecap
