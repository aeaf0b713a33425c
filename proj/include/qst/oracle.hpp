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

#ifndef QST_ORACLE_HPP_
#define QST_ORACLE_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qst/chain_model.hpp"
#include "qst/channel.hpp"
#include "qst/errors.hpp"
#include "qst/linalg.hpp"

namespace qst {

// Brute-force reference on the full 2^N space. Basis state index bits:
// site s occupies bit (N - s), so site 1 is the most significant qubit and
// a set bit is the excited state |1>.

inline constexpr int kMaxOracleSites = 12;

inline void check_oracle_capacity(int n_sites) {
  if (n_sites > kMaxOracleSites) {
    throw CapacityError("n_sites", "oracle supports at most " + std::to_string(kMaxOracleSites) +
                                       " sites, got " + std::to_string(n_sites));
  }
  if (n_sites < 1) throw ParameterError("n_sites", "must be positive");
}

struct FullState {
  ComplexVector amplitudes;
  int n_sites;

  FullState(ComplexVector amps, int n) : amplitudes(std::move(amps)), n_sites(n) {
    check_oracle_capacity(n);
    if (amplitudes.size() != (Eigen::Index{1} << n)) {
      throw ParameterError("amplitudes", "length must be 2^N");
    }
    if (std::abs(amplitudes.norm() - 1.0) > 1e-12) {
      throw ParameterError("amplitudes", "state must be normalized");
    }
  }
};

namespace detail {

inline std::uint32_t site_mask(int n_sites, int site) {
  return std::uint32_t{1} << (n_sites - site);
}

inline bool excited(std::uint32_t state, int n_sites, int site) {
  return (state & site_mask(n_sites, site)) != 0;
}

// Pauli action P|b> = coeff |b'> on one site.
struct PauliImage {
  std::uint32_t state;
  complex_t coeff;
};

inline PauliImage apply_pauli(char pauli, PauliImage in, int n_sites, int site) {
  const bool one = excited(in.state, n_sites, site);
  switch (pauli) {
    case 'X':
      return {in.state ^ site_mask(n_sites, site), in.coeff};
    case 'Y':  // Y|0> = i|1>, Y|1> = -i|0>
      return {in.state ^ site_mask(n_sites, site), in.coeff * (one ? -kI : kI)};
    case 'Z':
      return {in.state, in.coeff * (one ? -1.0 : 1.0)};
    default:
      return in;
  }
}

}  // namespace detail

/// Full Hamiltonian by explicit Pauli-string summation, shifted so the all-zero
/// state has energy zero.
inline RealMatrix full_hamiltonian(const ChainSpec &spec) {
  const int n = spec.n_sites();
  check_oracle_capacity(n);
  const std::uint32_t dim = std::uint32_t{1} << n;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  auto add_term = [&](double coeff, const std::vector<std::pair<char, int>> &ops) {
    if (coeff == 0.0) return;
    for (std::uint32_t b = 0; b < dim; ++b) {
      detail::PauliImage img{b, 1.0};
      for (const auto &[p, site] : ops) img = detail::apply_pauli(p, img, n, site);
      h(img.state, b) += coeff * img.coeff;
    }
  };
  for (int i = 1; i <= n; ++i) {
    add_term(spec.field(i), {{'Z', i}});
    for (int j = i + 1; j <= n; ++j) {
      const double jij = spec.coupling(i, j);
      add_term(jij, {{'X', i}, {'X', j}});
      add_term(jij, {{'Y', i}, {'Y', j}});
      add_term(jij * spec.anisotropy(i, j), {{'Z', i}, {'Z', j}});
    }
  }
  if (max_abs(h.imag()) > 1e-12) {
    throw NumericError("full Hamiltonian is not real", max_abs(h.imag()));
  }
  RealMatrix out = h.real();
  out -= out(0, 0) * RealMatrix::Identity(dim, dim);
  return out;
}

/// Q = sum_i Z_i as a diagonal.
inline RealVector total_magnetization(int n_sites) {
  const std::uint32_t dim = std::uint32_t{1} << n_sites;
  RealVector q(dim);
  for (std::uint32_t b = 0; b < dim; ++b) q(b) = n_sites - 2.0 * std::popcount(b);
  return q;
}

/// max |[H, Q]|
inline double magnetization_commutator(const RealMatrix &h, int n_sites) {
  const RealVector q = total_magnetization(n_sites);
  return max_abs(RealMatrix(h * q.asDiagonal() - q.asDiagonal() * h));
}

/// Full-space eigendecomposition in extended precision, computed once.
class FullOracle {
 public:
  explicit FullOracle(const ChainSpec &spec) : n_(spec.n_sites()), h_(full_hamiltonian(spec)) {
    ExtendedEigen eig = extended_eigen(h_);
    if (!eig.converged) {
      throw NumericError("oracle eigensolver did not converge", symmetry_defect(h_));
    }
    eigenvalues_ = std::move(eig.eigenvalues);
    eigenvectors_ = eig.eigenvectors.cast<complex_t>();
  }

  int n_sites() const noexcept { return n_; }
  const RealMatrix &hamiltonian() const noexcept { return h_; }

  ComplexVector evolve(const ComplexVector &psi, double t) const {
    if (!std::isfinite(t)) throw ParameterError("t", "must be finite");
    const ComplexVector ph = unit_phases(eigenvalues_, t);
    return eigenvectors_ * ph.cwiseProduct(eigenvectors_.adjoint() * psi);
  }

  FullState evolve(const FullState &s, double t) const {
    if (s.n_sites != n_) throw ParameterError("state", "site count mismatch");
    return {evolve(s.amplitudes, t), n_};
  }

  /// <out|U(t)|in> between computational basis states given by excited sites.
  complex_t amplitude(const Configuration &in, const Configuration &out, double t) const {
    ComplexVector e = ComplexVector::Zero(eigenvalues_.size());
    e(index_of(in)) = 1.0;
    return evolve(e, t)(index_of(out));
  }

  std::uint32_t index_of(const Configuration &excited_sites) const {
    std::uint32_t b = 0;
    for (int s : excited_sites) {
      if (s < 1 || s > n_) throw ParameterError("site", "out of range");
      b |= detail::site_mask(n_, s);
    }
    return b;
  }

 private:
  int n_;
  RealMatrix h_;
  ExtVector eigenvalues_;
  ComplexMatrix eigenvectors_;
};

inline FullState evolve_full(const ChainSpec &spec, const FullState &initial, double t) {
  return FullOracle(spec).evolve(initial, t);
}

/// Partial trace onto `sites`; the first listed site is the most significant
/// factor of the result.
inline ComplexMatrix reduced_density(const FullState &state, const std::vector<int> &sites) {
  const int n = state.n_sites;
  if (sites.empty()) throw ParameterError("sites", "empty");
  for (std::size_t k = 0; k < sites.size(); ++k) {
    if (sites[k] < 1 || sites[k] > n) throw ParameterError("sites", "out of range");
    for (std::size_t l = 0; l < k; ++l)
      if (sites[l] == sites[k]) throw ParameterError("sites", "must be distinct");
  }
  std::vector<int> rest;
  for (int s = 1; s <= n; ++s)
    if (std::find(sites.begin(), sites.end(), s) == sites.end()) rest.push_back(s);
  const Eigen::Index dk = Eigen::Index{1} << sites.size();
  const Eigen::Index dr = Eigen::Index{1} << rest.size();
  ComplexMatrix m = ComplexMatrix::Zero(dk, dr);
  const std::uint32_t dim = std::uint32_t{1} << n;
  for (std::uint32_t b = 0; b < dim; ++b) {
    Eigen::Index kept = 0, other = 0;
    for (int s : sites) kept = (kept << 1) | (detail::excited(b, n, s) ? 1 : 0);
    for (int s : rest) other = (other << 1) | (detail::excited(b, n, s) ? 1 : 0);
    m(kept, other) = state.amplitudes(b);
  }
  return m * m.adjoint();
}

/// |psi_A> on the sender sites times the scenario's fixed channel state.
inline FullState scenario_initial_state(Scenario scenario, int n_sites, const ComplexVector &psi) {
  check_oracle_capacity(n_sites);
  const int n = n_sites;
  require_sites(scenario, n);
  const bool two = is_two_qubit(scenario);
  if (psi.size() != (two ? 4 : 2)) throw ParameterError("psi", "wrong dimension");
  ComplexVector amps = ComplexVector::Zero(Eigen::Index{1} << n);
  const std::uint32_t m1 = detail::site_mask(n, 1);
  if (two) {
    const std::uint32_t m2 = detail::site_mask(n, 2);
    amps(0) = psi(0);
    amps(m2) = psi(1);
    amps(m1) = psi(2);
    amps(m1 | m2) = psi(3);
  } else if (scenario == Scenario::OneQubitVacuum) {
    amps(0) = psi(0);
    amps(m1) = psi(1);
  } else {
    const double w = 1.0 / std::sqrt(double(n - 2));
    for (int j = 2; j <= n - 1; ++j) {
      const std::uint32_t mj = detail::site_mask(n, j);
      amps(mj) += w * psi(0);
      amps(m1 | mj) += w * psi(1);
    }
  }
  return {amps, n};
}

inline std::vector<int> scenario_receiver(Scenario scenario, int n_sites) {
  return is_two_qubit(scenario) ? std::vector<int>{n_sites - 1, n_sites}
                                : std::vector<int>{n_sites};
}

/// Receiver state predicted by the oracle for input psi at time t.
inline ComplexMatrix oracle_receiver_state(const FullOracle &oracle, Scenario scenario,
                                           const ComplexVector &psi, double t) {
  const int n = oracle.n_sites();
  const FullState out = oracle.evolve(scenario_initial_state(scenario, n, psi), t);
  return reduced_density(out, scenario_receiver(scenario, n));
}

/// Pure inputs whose projectors span the operator space (products of
/// |0>, |1>, |+>, |+i>), plus one generic state supplied by the caller.
inline std::vector<ComplexVector> tomographic_inputs(Scenario scenario,
                                                     const ComplexVector &generic) {
  const double h = 1.0 / std::sqrt(2.0);
  std::vector<ComplexVector> single;
  for (auto [a, b] : {std::pair<complex_t, complex_t>{1.0, 0.0},
                      {0.0, 1.0},
                      {h, h},
                      {h, complex_t(0.0, h)}}) {
    ComplexVector v(2);
    v << a, b;
    single.push_back(v);
  }
  std::vector<ComplexVector> out;
  if (is_two_qubit(scenario)) {
    for (const auto &x : single)
      for (const auto &y : single) {
        ComplexVector v(4);
        v << x(0) * y(0), x(0) * y(1), x(1) * y(0), x(1) * y(1);
        out.push_back(v);
      }
  } else {
    out = single;
  }
  out.push_back(generic);
  return out;
}

}  // namespace qst

#endif  // QST_ORACLE_HPP_
