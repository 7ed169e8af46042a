#ifndef POLYBAN_LINALG_HPP
#define POLYBAN_LINALG_HPP

#include <polyban/rational.hpp>

#include <vector>

namespace polyban {

class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(const std::string& what = "singular matrix")
      : std::runtime_error(what) {}
};

inline Eigen::Index rank_of(const Mat& m) {
  if (m.size() == 0) return 0;
  return Eigen::FullPivLU<Mat>(m).rank();
}

/// Exact inverse; throws SingularMatrixError when not invertible.
inline Mat inverse_of(const Mat& m) {
  Eigen::FullPivLU<Mat> lu(m);
  if (m.rows() != m.cols() || lu.rank() != m.rows())
    throw SingularMatrixError();
  return lu.inverse();
}

/// Solves A x = b exactly. Empty result when the system is inconsistent.
inline std::optional<Vec> solve_exact(const Mat& a, const Vec& b) {
  if (a.rows() != b.size()) throw std::invalid_argument("solve_exact: shape mismatch");
  if (a.size() == 0) {
    if (b.size() == 0 || b.isZero()) return Vec::Zero(a.cols());
    return std::nullopt;
  }
  Eigen::FullPivLU<Mat> lu(a);
  Vec x = lu.solve(b);
  if ((a * x - b).isZero()) return x;
  return std::nullopt;
}

/// Basis of the null space, one column per kernel dimension (zero columns
/// when the kernel is trivial).
inline Mat kernel_of(const Mat& m) {
  if (m.size() == 0) {
    Mat id = Mat::Identity(m.cols(), m.cols());
    return id;
  }
  Eigen::FullPivLU<Mat> lu(m);
  if (lu.dimensionOfKernel() == 0) return Mat(m.cols(), 0);
  return lu.kernel().eval();
}

/// Left inverse of a full-column-rank matrix: L * u = I.
inline Mat left_inverse_of(const Mat& u) {
  Mat gram = u.transpose() * u;
  Eigen::FullPivLU<Mat> lu(gram);
  if (lu.rank() != u.cols())
    throw SingularMatrixError("left_inverse_of: columns not independent");
  return lu.inverse() * u.transpose();
}

/// Right inverse of a full-row-rank matrix: q * R = I.
inline Mat right_inverse_of(const Mat& q) {
  Mat gram = q * q.transpose();
  Eigen::FullPivLU<Mat> lu(gram);
  if (lu.rank() != q.rows())
    throw SingularMatrixError("right_inverse_of: rows not independent");
  return q.transpose() * lu.inverse();
}

/// Greedily selects indices of rows forming a row basis (first occurrence wins,
/// so the choice is deterministic).
inline std::vector<int> row_basis_indices(const Mat& m) {
  std::vector<int> picked;
  if (m.cols() == 0) return picked;
  Mat acc(0, m.cols());
  for (int r = 0; r < m.rows(); ++r) {
    Mat trial(acc.rows() + 1, m.cols());
    trial.topRows(acc.rows()) = acc;
    trial.row(acc.rows()) = m.row(r);
    if (rank_of(trial) > rank_of(acc)) {
      acc = std::move(trial);
      picked.push_back(r);
      if (acc.rows() == m.cols()) break;
    }
  }
  return picked;
}

/// Extends the (independent) columns of u to a basis of the ambient space by
/// appending standard basis vectors, chosen greedily in index order.
inline Mat extend_to_basis(const Mat& u) {
  const Eigen::Index d = u.rows();
  Mat acc = u;
  for (Eigen::Index j = 0; j < d && acc.cols() < d; ++j) {
    Mat trial(d, acc.cols() + 1);
    trial.leftCols(acc.cols()) = acc;
    trial.col(acc.cols()) = Vec::Unit(d, j);
    if (rank_of(trial) > rank_of(acc)) acc = std::move(trial);
  }
  if (acc.cols() != d) throw SingularMatrixError("extend_to_basis: input not independent");
  return acc;
}

inline Mat columns_to_matrix(const std::vector<Vec>& cols, Eigen::Index dim) {
  Mat m(dim, static_cast<Eigen::Index>(cols.size()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j) = cols[static_cast<size_t>(j)];
  return m;
}

inline std::vector<Vec> matrix_to_columns(const Mat& m) {
  std::vector<Vec> cols;
  cols.reserve(static_cast<size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) cols.push_back(m.col(j));
  return cols;
}

}  // namespace polyban

#endif  // POLYBAN_LINALG_HPP
