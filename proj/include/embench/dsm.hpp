#pragma once

#include <algorithm>

#include <Eigen/Dense>

#include "embench/model.hpp"

namespace embench {

/// Φ(f) = U Uᵀ f.
inline Vec dsm_project(const Mat& u, const Vec& f) {
  if (f.size() != u.rows()) throw data_error("dsm_project: feature dimension does not match the basis");
  return u * (u.transpose() * f);
}

inline Mat projection_matrix(const Mat& u) { return u * u.transpose(); }

/// max |UᵀU − I|.
inline double orthonormality_error(const Mat& u) {
  return (u.transpose() * u - Mat::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

/// max |P² − P|.
inline double idempotence_error(const Mat& u) {
  const Mat p = projection_matrix(u);
  return (p * p - p).cwiseAbs().maxCoeff();
}

/// Top-`k` eigenvectors of the second-moment matrix of the columns of
/// `features` (d x n), strongest first, each signed so its largest-magnitude
/// entry is positive.
inline Mat principal_basis(const Mat& features, int k) {
  if (k <= 0 || k >= features.rows()) throw config_error("principal_basis: rank must lie in (0, d)");
  if (features.cols() == 0) throw data_error("principal_basis: no features");
  const Mat gram = features * features.transpose() / static_cast<double>(features.cols());
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  Mat u(features.rows(), k);
  for (int j = 0; j < k; ++j) {
    Vec v = es.eigenvectors().col(features.rows() - 1 - j);
    Eigen::Index at = 0;
    v.cwiseAbs().maxCoeff(&at);
    if (v(at) < 0) v = -v;
    u.col(j) = v;
  }
  orthonormalize(u);
  return u;
}

inline Mat dsm_basis(const ModelState& st) { return view(st.params, st.layout().u); }

}  // namespace embench
