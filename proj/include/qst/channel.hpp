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

#ifndef QST_CHANNEL_HPP_
#define QST_CHANNEL_HPP_

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qst/dynamics.hpp"
#include "qst/errors.hpp"
#include "qst/linalg.hpp"

namespace qst {

inline constexpr double kCompletenessTolerance = 1e-9;
inline constexpr double kZeroOperatorThreshold = 1e-14;
inline constexpr double kNormTolerance = 1e-12;

enum class Scenario {
  /// Sender site 1, receiver site N, channel in |0...0>.
  OneQubitVacuum,
  /// Sender site 1, receiver site N, channel in the uniform one-excitation state.
  OneQubitUniform,
  /// Sender sites {1, 2}, receiver sites {N-1, N}, channel in |0...0>.
  TwoQubitVacuum,
};

inline const char *scenario_name(Scenario s) {
  switch (s) {
    case Scenario::OneQubitVacuum:
      return "one_qubit_vacuum";
    case Scenario::OneQubitUniform:
      return "one_qubit_uniform";
    case Scenario::TwoQubitVacuum:
      return "two_qubit";
  }
  return "?";
}

inline bool is_two_qubit(Scenario s) { return s == Scenario::TwoQubitVacuum; }
inline int qubit_dimension(Scenario s) { return is_two_qubit(s) ? 4 : 2; }

inline int min_sites(Scenario s) {
  switch (s) {
    case Scenario::OneQubitVacuum:
      return 2;
    case Scenario::OneQubitUniform:
      return 4;
    case Scenario::TwoQubitVacuum:
      return 5;
  }
  return 2;
}

inline void require_sites(Scenario s, int n_sites) {
  if (n_sites < min_sites(s)) {
    throw ParameterError("n_sites", std::string(scenario_name(s)) + " needs at least " +
                                        std::to_string(min_sites(s)) + " sites, got " +
                                        std::to_string(n_sites));
  }
}

/// Where the state is written and read, and the fixed initial state of the
/// rest of the network as a superposition of complement configurations.
///
/// Qubit ordering: the first listed site is the most significant tensor
/// factor. For two-qubit transfer the sender is (1, 2) and the receiver
/// (N-1, N); sender qubit 1 is read out at site N-1 and sender qubit 2 at
/// site N.
struct ChannelGeometry {
  std::vector<int> sender;
  std::vector<int> receiver;
  std::vector<std::pair<Configuration, complex_t>> complement_state;
};

inline ChannelGeometry channel_geometry(Scenario s, int n_sites) {
  require_sites(s, n_sites);
  const int n = n_sites;
  ChannelGeometry g;
  switch (s) {
    case Scenario::OneQubitVacuum:
      g.sender = {1};
      g.receiver = {n};
      g.complement_state = {{Configuration{}, 1.0}};
      break;
    case Scenario::OneQubitUniform: {
      g.sender = {1};
      g.receiver = {n};
      const double w = 1.0 / std::sqrt(double(n - 2));
      for (int j = 2; j <= n - 1; ++j) g.complement_state.push_back({Configuration{j}, w});
      break;
    }
    case Scenario::TwoQubitVacuum:
      g.sender = {1, 2};
      g.receiver = {n - 1, n};
      g.complement_state = {{Configuration{}, 1.0}};
      break;
  }
  return g;
}

/// Operators of the sender -> receiver map at one time.
struct KrausSet {
  std::vector<ComplexMatrix> operators;
  Scenario scenario = Scenario::OneQubitVacuum;
  double time = 0.0;
  /// max |sum E^dagger E - I| of `operators`.
  double completeness_defect = 0.0;
  /// Size of the full Kraus family before all-zero operators were dropped.
  std::size_t nominal_count = 0;

  int dimension() const { return qubit_dimension(scenario); }
};

inline double completeness_defect(const std::vector<ComplexMatrix> &ops, int dim) {
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (const auto &e : ops) sum += e.adjoint() * e;
  return max_abs(sum - ComplexMatrix::Identity(dim, dim));
}

/// Drops operators with every entry below 1e-14, then certifies trace
/// preservation.
inline KrausSet make_kraus_set(std::vector<ComplexMatrix> ops, Scenario scenario, double time) {
  KrausSet set;
  set.scenario = scenario;
  set.time = time;
  set.nominal_count = ops.size();
  for (auto &e : ops)
    if (max_abs(e) >= kZeroOperatorThreshold) set.operators.push_back(std::move(e));
  set.completeness_defect = completeness_defect(set.operators, set.dimension());
  if (set.completeness_defect > kCompletenessTolerance) {
    throw NumericError("Kraus set is not trace preserving", set.completeness_defect);
  }
  return set;
}

namespace detail {

inline Configuration excited_sites(const std::vector<int> &sites, std::size_t bits) {
  Configuration out;
  const std::size_t n = sites.size();
  for (std::size_t k = 0; k < n; ++k)
    if ((bits >> (n - 1 - k)) & 1U) out.push_back(sites[k]);
  return out;
}

inline Configuration merged(Configuration a, const Configuration &b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

// All configurations on `sites` with at most `max_excitations` flipped spins,
// by excitation number and then lexicographically.
inline std::vector<Configuration> configurations_upto(const std::vector<int> &sites,
                                                      int max_excitations) {
  std::vector<Configuration> out{{}};
  const std::size_t n = sites.size();
  if (max_excitations >= 1)
    for (std::size_t i = 0; i < n; ++i) out.push_back({sites[i]});
  if (max_excitations >= 2)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) out.push_back({sites[i], sites[j]});
  return out;
}

}  // namespace detail

/// Kraus operators E_phi = <phi_Bc| U(t) |psi_Ac>, one per configuration
/// phi of the receiver's complement. Entry (beta, alpha) is
/// <beta, phi| U(t) |alpha, psi_Ac>.
template <TransitionAmplitudes Amps>
std::vector<ComplexMatrix> kraus_from_definition(const Amps &amps, const ChannelGeometry &g) {
  const int n = amps.n_sites();
  std::vector<int> complement;
  for (int s = 1; s <= n; ++s)
    if (std::find(g.receiver.begin(), g.receiver.end(), s) == g.receiver.end())
      complement.push_back(s);

  std::size_t max_init = 0;
  for (const auto &[cfg, w] : g.complement_state) max_init = std::max(max_init, cfg.size());
  const int q_max = static_cast<int>(g.sender.size() + max_init);

  const std::size_t din = std::size_t{1} << g.sender.size();
  const std::size_t dout = std::size_t{1} << g.receiver.size();
  std::vector<ComplexMatrix> ops;
  for (const Configuration &phi : detail::configurations_upto(complement, q_max)) {
    ComplexMatrix e = ComplexMatrix::Zero(static_cast<Eigen::Index>(dout),
                                          static_cast<Eigen::Index>(din));
    for (std::size_t alpha = 0; alpha < din; ++alpha) {
      const Configuration sent = detail::excited_sites(g.sender, alpha);
      for (std::size_t beta = 0; beta < dout; ++beta) {
        const Configuration out = detail::merged(detail::excited_sites(g.receiver, beta), phi);
        complex_t value = 0.0;
        for (const auto &[cfg, w] : g.complement_state) {
          const Configuration in = detail::merged(sent, cfg);
          if (in.size() == out.size()) value += w * sector_amplitude(amps, in, out);
        }
        e(static_cast<Eigen::Index>(beta), static_cast<Eigen::Index>(alpha)) = value;
      }
    }
    ops.push_back(std::move(e));
  }
  return ops;
}

/// Vacuum channel from the arrival amplitude alone: E0 = diag(1, a) and the
/// lumped amplitude-damping operator E1 = sqrt(1 - |a|^2) |0><1|.
inline KrausSet kraus_one_qubit_vacuum(complex_t arrival, double time = 0.0) {
  if (std::abs(arrival) > 1.0 + 1e-10) {
    throw ParameterError("arrival", "amplitude modulus exceeds one");
  }
  ComplexMatrix e0 = ComplexMatrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = arrival;
  ComplexMatrix e1 = ComplexMatrix::Zero(2, 2);
  e1(0, 1) = std::sqrt(std::max(0.0, 1.0 - std::norm(arrival)));
  return make_kraus_set({std::move(e0), std::move(e1)}, Scenario::OneQubitVacuum, time);
}

template <TransitionAmplitudes Amps>
KrausSet kraus_one_qubit_vacuum(const Amps &amps, int n_sites) {
  require_sites(Scenario::OneQubitVacuum, n_sites);
  return kraus_one_qubit_vacuum(amps.a(1, n_sites), amps.time());
}

template <TransitionAmplitudes Amps>
KrausSet kraus_one_qubit_uniform(const Amps &amps, int n_sites) {
  const auto g = channel_geometry(Scenario::OneQubitUniform, n_sites);
  return make_kraus_set(kraus_from_definition(amps, g), Scenario::OneQubitUniform, amps.time());
}

template <TransitionAmplitudes Amps>
KrausSet kraus_two_qubit_vacuum(const Amps &amps, int n_sites) {
  const auto g = channel_geometry(Scenario::TwoQubitVacuum, n_sites);
  return make_kraus_set(kraus_from_definition(amps, g), Scenario::TwoQubitVacuum, amps.time());
}

template <TransitionAmplitudes Amps>
KrausSet build_kraus(const Amps &amps, Scenario scenario) {
  switch (scenario) {
    case Scenario::OneQubitVacuum:
      return kraus_one_qubit_vacuum(amps, amps.n_sites());
    case Scenario::OneQubitUniform:
      return kraus_one_qubit_uniform(amps, amps.n_sites());
    case Scenario::TwoQubitVacuum:
      return kraus_two_qubit_vacuum(amps, amps.n_sites());
  }
  throw ParameterError("scenario", "unknown");
}

/// Operator count of the full family, before dropping zeros.
inline std::size_t nominal_kraus_count(Scenario s, int n) {
  switch (s) {
    case Scenario::OneQubitVacuum:
      return 2;
    case Scenario::OneQubitUniform:
      return 1 + std::size_t(n - 1) + std::size_t(n - 1) * std::size_t(n - 2) / 2;
    case Scenario::TwoQubitVacuum:
      return 1 + std::size_t(n - 2) + std::size_t(n - 2) * std::size_t(n - 3) / 2;
  }
  return 0;
}

inline void require_normalized(const ComplexVector &psi, int dim) {
  if (psi.size() != dim) {
    throw ParameterError("input", "expected dimension " + std::to_string(dim) + ", got " +
                                      std::to_string(psi.size()));
  }
  if (std::abs(psi.norm() - 1.0) > kNormTolerance) {
    throw ParameterError("input", "state is not normalized (norm " +
                                      std::to_string(psi.norm()) + ")");
  }
}

/// rho_B = sum_E E |psi><psi| E^dagger
inline ComplexMatrix apply_channel(const KrausSet &kraus, const ComplexVector &input) {
  require_normalized(input, kraus.dimension());
  const int d = kraus.dimension();
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  for (const auto &e : kraus.operators) {
    const ComplexVector v = e * input;
    rho += v * v.adjoint();
  }
  return rho;
}

/// sum_E |<psi|E|psi>|^2, no validation.
inline double fidelity_kraus_sum_unchecked(const KrausSet &kraus, const ComplexVector &psi) {
  double f = 0.0;
  for (const auto &e : kraus.operators) f += std::norm(psi.dot(e * psi));
  return f;
}

inline double fidelity_kraus_sum(const KrausSet &kraus, const ComplexVector &input) {
  require_normalized(input, kraus.dimension());
  return fidelity_kraus_sum_unchecked(kraus, input);
}

/// <psi| rho_B |psi>
inline double fidelity_overlap(const KrausSet &kraus, const ComplexVector &input) {
  return input.dot(apply_channel(kraus, input) * input).real();
}

inline double clamp_fidelity(double f) {
  constexpr double slack = 1e-10;
  if (f < -slack || f > 1.0 + slack) {
    throw NumericError("fidelity outside [0, 1]", f < 0.0 ? -f : f - 1.0);
  }
  return std::clamp(f, 0.0, 1.0);
}

inline double fidelity(const KrausSet &kraus, const ComplexVector &input) {
  return clamp_fidelity(fidelity_kraus_sum(kraus, input));
}

}  // namespace qst

#endif  // QST_CHANNEL_HPP_
