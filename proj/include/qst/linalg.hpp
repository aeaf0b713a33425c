// Copyright 2026 The qst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QST_LINALG_HPP_
#define QST_LINALG_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

namespace qst {

using complex_t = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using ExtMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using ExtVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr complex_t kI{0.0, 1.0};

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived> &m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// max |a_ij - a_ji|
inline double symmetry_defect(const RealMatrix &m) {
  return max_abs(m - m.transpose());
}

/// max |U^dagger U - I|
inline double unitarity_defect(const ComplexMatrix &u) {
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols()));
}

/// The dyad |psi><psi|.
inline ComplexMatrix projector(const ComplexVector &psi) {
  return psi * psi.adjoint();
}

/// Trace distance (1/2)||rho - sigma||_1 between Hermitian matrices.
inline double trace_distance(const ComplexMatrix &rho, const ComplexMatrix &sigma) {
  const ComplexMatrix diff = rho - sigma;
  const ComplexMatrix herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

inline double min_eigenvalue(const ComplexMatrix &hermitian) {
  const ComplexMatrix herm = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

inline double purity(const ComplexMatrix &rho) { return (rho * rho).trace().real(); }

/// exp(-i w_k t), with w_k t formed and reduced mod 2 pi in extended
/// precision.
inline ComplexVector unit_phases(const ExtVector &w, double t) {
  constexpr long double two_pi = 6.283185307179586476925286766559005768L;
  ComplexVector out(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    const long double arg = w(k) * static_cast<long double>(t);
    const double reduced = static_cast<double>(arg - two_pi * std::nearbyint(arg / two_pi));
    out(k) = complex_t(std::cos(reduced), -std::sin(reduced));
  }
  return out;
}

/// Symmetric eigensolve in extended precision. Eigenvalues stay extended;
/// eigenvectors are rounded to double.
struct ExtendedEigen {
  ExtVector eigenvalues;
  RealMatrix eigenvectors;
  bool converged;
};

inline ExtendedEigen extended_eigen(const RealMatrix &symmetric) {
  Eigen::SelfAdjointEigenSolver<ExtMatrix> solver(symmetric.cast<long double>());
  if (solver.info() != Eigen::Success) return {{}, {}, false};
  return {solver.eigenvalues(), solver.eigenvectors().cast<double>(), true};
}

}  // namespace qst

#endif  // QST_LINALG_HPP_
