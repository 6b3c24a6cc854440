#include <algorithm>
#include <cmath>
#include <string>

#include "polybilliard/numerics.hpp"

namespace polybilliard {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::PreconditionViolation: return "precondition-violation";
    case ErrorKind::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

void ToleranceProfile::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0 && v < 1e-2)) {
      fail(ErrorKind::InvalidInput,
           std::string("tolerance ") + name + " must lie in (0, 1e-2)");
    }
  };
  check(rank_rel, "rank_rel");
  check(feas, "feas");
  check(positivity, "positivity");
}

namespace {

void require_finite(const Mat& m) {
  if (!m.allFinite()) fail(ErrorKind::InvalidInput, "matrix has non-finite entries");
}

struct Svd {
  Eigen::JacobiSVD<Mat> svd;
  int rank = 0;
};

// `floor_scale` lets callers whose natural scale is known (e.g. Q - I for an
// orthogonal Q) keep a tiny largest singular value from defining the cutoff.
Svd decompose(const Mat& m, const ToleranceProfile& tol, double floor_scale = 0.0) {
  Svd out{Eigen::JacobiSVD<Mat>(m, Eigen::ComputeFullU | Eigen::ComputeFullV), 0};
  const auto& sv = out.svd.singularValues();
  if (sv.size() == 0) return out;
  const double scale = std::max(sv(0), floor_scale);
  if (scale == 0.0) return out;
  const double cutoff =
      tol.rank_rel * scale * static_cast<double>(std::max(m.rows(), m.cols()));
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++out.rank;
  }
  return out;
}

Mat trailing_right_vectors(const Svd& s, Eigen::Index cols) {
  if (cols == 0) return Mat(0, 0);
  const Mat& v = s.svd.matrixV();
  return v.rightCols(cols - s.rank);
}

}  // namespace

int matrix_rank(const Mat& m, const ToleranceProfile& tol) {
  require_finite(m);
  if (m.size() == 0) return 0;
  return decompose(m, tol).rank;
}

Mat null_space(const Mat& m, const ToleranceProfile& tol, double floor_scale) {
  require_finite(m);
  if (m.rows() == 0) return Mat::Identity(m.cols(), m.cols());
  return trailing_right_vectors(decompose(m, tol, floor_scale), m.cols());
}

Mat column_span(const Mat& m, const ToleranceProfile& tol) {
  require_finite(m);
  if (m.cols() == 0 || m.rows() == 0) return Mat(m.rows(), 0);
  auto s = decompose(m, tol);
  return s.svd.matrixU().leftCols(s.rank);
}

std::optional<Vec> positive_kernel(const Mat& m, const ToleranceProfile& tol) {
  require_finite(m);
  const auto cols = m.cols();
  if (cols < 1) fail(ErrorKind::PreconditionViolation, "positive_kernel: empty matrix");
  auto s = decompose(m, tol);
  if (s.rank != cols - 1) {
    fail(ErrorKind::PreconditionViolation,
         "positive_kernel: rank " + std::to_string(s.rank) + " != columns - 1 (" +
             std::to_string(cols - 1) + ")");
  }
  Vec v = s.svd.matrixV().col(cols - 1);
  if (v.sum() < 0.0) v = -v;
  const double largest = v.cwiseAbs().maxCoeff();
  if (v.minCoeff() <= tol.positivity * largest) return std::nullopt;
  return Vec(v / v.minCoeff());
}

Mat reflection(const Vec& u) {
  const auto n = u.size();
  return Mat::Identity(n, n) - 2.0 * u * u.transpose();
}

Mat fixed_subspace(const Mat& q, const ToleranceProfile& tol) {
  require_finite(q);
  if (q.rows() != q.cols()) fail(ErrorKind::InvalidInput, "fixed_subspace: matrix not square");
  const auto n = q.rows();
  const double defect = (q.transpose() * q - Mat::Identity(n, n)).norm();
  if (defect > tol.feas) {
    fail(ErrorKind::InvalidInput, "fixed_subspace: matrix is not orthogonal");
  }
  // Q - I has singular values in [0, 2].
  auto s = decompose(q - Mat::Identity(n, n), tol, 1.0);
  return trailing_right_vectors(s, n);
}

}  // namespace polybilliard
