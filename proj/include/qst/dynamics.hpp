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

#ifndef QST_DYNAMICS_HPP_
#define QST_DYNAMICS_HPP_

#include <algorithm>
#include <cmath>
#include <concepts>
#include <utility>
#include <vector>

#include "qst/chain_model.hpp"
#include "qst/errors.hpp"
#include "qst/linalg.hpp"
#include "qst/sector_basis.hpp"

namespace qst {

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kSpectralTolerance = 1e-10;

/// Eigendecomposition H = V diag(w) V^T of a real symmetric matrix, with
/// eigenvalues ascending. Evaluates exp(-i H t) at any t.
class SpectralPropagator {
 public:
  SpectralPropagator(ExtVector eigenvalues, RealMatrix eigenvectors)
      : eigenvalues_ext_(std::move(eigenvalues)),
        eigenvalues_(eigenvalues_ext_.cast<double>()),
        eigenvectors_(std::move(eigenvectors)),
        eigenvectors_c_(eigenvectors_.cast<complex_t>()) {}

  const RealVector &eigenvalues() const noexcept { return eigenvalues_; }
  const ExtVector &extended_eigenvalues() const noexcept { return eigenvalues_ext_; }
  const RealMatrix &eigenvectors() const noexcept { return eigenvectors_; }
  Eigen::Index dimension() const noexcept { return eigenvalues_.size(); }

  ComplexVector phases(double t) const {
    check_time(t);
    return unit_phases(eigenvalues_ext_, t);
  }

  /// U(t) = V exp(-i w t) V^T.
  ComplexMatrix at(double t) const {
    const ComplexVector ph = phases(t);
    return eigenvectors_c_ * ph.asDiagonal() * eigenvectors_c_.transpose();
  }

  /// U(t) v without forming U(t).
  ComplexVector apply(const ComplexVector &v, double t) const {
    const ComplexVector ph = phases(t);
    const ComplexVector coeff = eigenvectors_c_.transpose() * v;
    return eigenvectors_c_ * ph.cwiseProduct(coeff);
  }

  /// <row| U(t) |col>
  complex_t element(Eigen::Index row, Eigen::Index col, double t) const {
    const ComplexVector ph = phases(t);
    complex_t sum = 0.0;
    for (Eigen::Index k = 0; k < dimension(); ++k)
      sum += eigenvectors_(row, k) * eigenvectors_(col, k) * ph(k);
    return sum;
  }

  double orthogonality_defect() const {
    return max_abs(eigenvectors_ * eigenvectors_.transpose() -
                   RealMatrix::Identity(dimension(), dimension()));
  }

  double reconstruction_defect(const RealMatrix &original) const {
    return max_abs(eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.transpose() -
                   original);
  }

 private:
  static void check_time(double t) {
    if (!std::isfinite(t)) throw ParameterError("t", "must be finite");
  }

  ExtVector eigenvalues_ext_;
  RealVector eigenvalues_;
  RealMatrix eigenvectors_;
  ComplexMatrix eigenvectors_c_;
};

/// Dense symmetric eigensolve. The returned decomposition satisfies the
/// orthogonality and reconstruction contract to 1e-10 (relative to the
/// matrix scale when its entries exceed one).
inline SpectralPropagator diagonalize(const RealMatrix &matrix) {
  if (matrix.rows() != matrix.cols()) throw ParameterError("matrix", "must be square");
  const double scale = std::max(1.0, max_abs(matrix));
  if (symmetry_defect(matrix) > kSymmetryTolerance * scale) {
    throw ParameterError("matrix", "not symmetric (defect " +
                                       std::to_string(symmetry_defect(matrix)) + ")");
  }
  ExtendedEigen eig = extended_eigen(matrix);
  if (!eig.converged) {
    throw NumericError("symmetric eigensolver did not converge", symmetry_defect(matrix));
  }
  SpectralPropagator out(std::move(eig.eigenvalues), std::move(eig.eigenvectors));
  const double ortho = out.orthogonality_defect();
  const double recon = out.reconstruction_defect(matrix);
  if (ortho > kSpectralTolerance || recon > kSpectralTolerance * scale) {
    throw NumericError("eigendecomposition violates its contract", std::max(ortho, recon));
  }
  return out;
}

inline ComplexMatrix propagator_at(const SpectralPropagator &spec, double t) { return spec.at(t); }

/// Anything that exposes one- and two-excitation transition amplitudes with
/// the a_i^j = <j|U_1|i> and b_{i1 i2}^{j1 j2} = <j1 j2|U_2|i1 i2> convention
/// (sources first, 1-based sites, pairs in either order).
template <typename T>
concept TransitionAmplitudes = requires(const T &amps, int s) {
  { amps.n_sites() } -> std::convertible_to<int>;
  { amps.time() } -> std::convertible_to<double>;
  { amps.a(s, s) } -> std::convertible_to<complex_t>;
  { amps.b(s, s, s, s) } -> std::convertible_to<complex_t>;
};

namespace detail {
inline std::size_t pair_index(const SectorBasis &basis, int i, int j) {
  if (i == j) throw ParameterError("pair", "sites must differ");
  return basis.index_of({std::min(i, j), std::max(i, j)});
}
}  // namespace detail

/// Full one- and two-excitation propagators at a fixed time.
class AmplitudeTable {
 public:
  AmplitudeTable(double time, ComplexMatrix one_exc, ComplexMatrix two_exc, int n_sites)
      : time_(time),
        one_exc_(std::move(one_exc)),
        two_exc_(std::move(two_exc)),
        basis2_(n_sites, 2) {}

  double time() const noexcept { return time_; }
  int n_sites() const noexcept { return basis2_.n_sites(); }

  /// one_exc()(i-1, j-1) = a_i^j
  const ComplexMatrix &one_exc() const noexcept { return one_exc_; }
  /// two_exc()(p, q) = b_{p}^{q} with p, q indices of the two-excitation basis.
  const ComplexMatrix &two_exc() const noexcept { return two_exc_; }

  complex_t a(int from, int to) const { return one_exc_(from - 1, to - 1); }
  complex_t b(int i1, int i2, int j1, int j2) const {
    return two_exc_(static_cast<Eigen::Index>(detail::pair_index(basis2_, i1, i2)),
                    static_cast<Eigen::Index>(detail::pair_index(basis2_, j1, j2)));
  }

  /// Amplitudes of the same dynamics with a uniform field `b` added: every
  /// excitation picks up exp(2 i b t).
  AmplitudeTable with_uniform_field(double b) const {
    const complex_t ph = std::exp(complex_t(0.0, 2.0 * b * time_));
    return {time_, one_exc_ * ph, two_exc_ * (ph * ph), n_sites()};
  }

  double unitarity_defect() const {
    return std::max(qst::unitarity_defect(one_exc_), qst::unitarity_defect(two_exc_));
  }

 private:
  double time_;
  ComplexMatrix one_exc_;
  ComplexMatrix two_exc_;
  SectorBasis basis2_;
};

/// Amplitudes out of a few source configurations only; what the closed-form
/// fidelity expressions need during long time scans.
class SourceAmplitudes {
 public:
  SourceAmplitudes(double time, int n_sites) : time_(time), basis2_(n_sites, 2) {}

  double time() const noexcept { return time_; }
  int n_sites() const noexcept { return basis2_.n_sites(); }

  void add_one(int from, ComplexVector column) { one_.emplace_back(from, std::move(column)); }
  void add_two(int i1, int i2, ComplexVector column) {
    two_.emplace_back(static_cast<int>(detail::pair_index(basis2_, i1, i2)), std::move(column));
  }

  complex_t a(int from, int to) const {
    for (const auto &[src, col] : one_)
      if (src == from) return col(to - 1) * phase_;
    throw ParameterError("from", "site " + std::to_string(from) + " was not propagated");
  }
  complex_t b(int i1, int i2, int j1, int j2) const {
    const int key = static_cast<int>(detail::pair_index(basis2_, i1, i2));
    for (const auto &[src, col] : two_)
      if (src == key)
        return col(static_cast<Eigen::Index>(detail::pair_index(basis2_, j1, j2))) * phase_ *
               phase_;
    throw ParameterError("from", "pair was not propagated");
  }

  SourceAmplitudes with_uniform_field(double b) const {
    SourceAmplitudes out = *this;
    out.phase_ *= std::exp(complex_t(0.0, 2.0 * b * time_));
    return out;
  }

 private:
  double time_;
  SectorBasis basis2_;
  complex_t phase_{1.0, 0.0};
  std::vector<std::pair<int, ComplexVector>> one_;
  std::vector<std::pair<int, ComplexVector>> two_;
};

static_assert(TransitionAmplitudes<AmplitudeTable>);
static_assert(TransitionAmplitudes<SourceAmplitudes>);

/// Amplitude <out|U(t)|in> between configurations with equal excitation
/// number (0, 1 or 2); zero across sectors.
template <TransitionAmplitudes Amps>
complex_t sector_amplitude(const Amps &amps, const Configuration &in, const Configuration &out) {
  if (in.size() != out.size()) return 0.0;
  switch (in.size()) {
    case 0:
      return 1.0;
    case 1:
      return amps.a(in[0], out[0]);
    case 2:
      return amps.b(in[0], in[1], out[0], out[1]);
    default:
      throw ParameterError("config", "at most two excitations are supported");
  }
}

/// Spectral data of the one- and two-excitation sectors of a chain, computed
/// once at construction. Immutable afterwards.
class ChainDynamics {
 public:
  explicit ChainDynamics(ChainSpec spec)
      : spec_(std::move(spec)),
        basis1_(spec_.n_sites(), 1),
        basis2_(spec_.n_sites(), 2),
        prop1_(diagonalize(sector_hamiltonian(spec_, basis1_))),
        prop2_(diagonalize(sector_hamiltonian(spec_, basis2_))) {}

  const ChainSpec &spec() const noexcept { return spec_; }
  int n_sites() const noexcept { return spec_.n_sites(); }
  const SectorBasis &basis(int q) const { return q == 1 ? basis1_ : basis2_; }
  const SpectralPropagator &propagator(int q) const { return q == 1 ? prop1_ : prop2_; }

  AmplitudeTable amplitudes_at(double t) const {
    // U is complex symmetric (real H), so a_i^j = U(j, i) = U(i, j).
    return {t, prop1_.at(t).transpose(), prop2_.at(t).transpose(), n_sites()};
  }

  /// a_from^to(t) from the spectral sum.
  complex_t transfer_amplitude(int from, int to, double t) const {
    return prop1_.element(to - 1, from - 1, t);
  }

  /// Propagates only the listed source configurations.
  SourceAmplitudes amplitudes_from(double t, const std::vector<int> &one_sources,
                                   const std::vector<std::pair<int, int>> &two_sources) const {
    SourceAmplitudes out(t, n_sites());
    for (int s : one_sources) {
      ComplexVector e = ComplexVector::Zero(prop1_.dimension());
      e(s - 1) = 1.0;
      out.add_one(s, prop1_.apply(e, t));
    }
    for (const auto &[i, j] : two_sources) {
      ComplexVector e = ComplexVector::Zero(prop2_.dimension());
      e(static_cast<Eigen::Index>(detail::pair_index(basis2_, i, j))) = 1.0;
      out.add_two(i, j, prop2_.apply(e, t));
    }
    return out;
  }

 private:
  ChainSpec spec_;
  SectorBasis basis1_;
  SectorBasis basis2_;
  SpectralPropagator prop1_;
  SpectralPropagator prop2_;
};

inline AmplitudeTable amplitudes_at(const ChainSpec &spec, double t) {
  return ChainDynamics(spec).amplitudes_at(t);
}

}  // namespace qst

#endif  // QST_DYNAMICS_HPP_
