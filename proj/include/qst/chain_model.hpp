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

#ifndef QST_CHAIN_MODEL_HPP_
#define QST_CHAIN_MODEL_HPP_

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>

#include "qst/errors.hpp"
#include "qst/linalg.hpp"
#include "qst/sector_basis.hpp"

namespace qst {

// Hamiltonian convention used throughout the library:
//
//   H = sum_{i<j} J_ij (X_i X_j + Y_i Y_j + D_ij Z_i Z_j) + sum_i B_i Z_i
//
// with one term per unordered pair, Z|0> = +|0> and Z|1> = -|1>. Every sector
// matrix (and the full-space oracle matrix) is shifted by the vacuum energy,
// so |0...0> has energy exactly zero.

/// Couplings, anisotropies and local fields of an N-site spin network.
/// Sites are 1-based.
class ChainSpec {
 public:
  explicit ChainSpec(int n_sites)
      : n_(n_sites),
        couplings_(RealMatrix::Zero(n_sites > 0 ? n_sites : 0, n_sites > 0 ? n_sites : 0)),
        anisotropy_(RealMatrix::Zero(n_sites > 0 ? n_sites : 0, n_sites > 0 ? n_sites : 0)),
        fields_(RealVector::Zero(n_sites > 0 ? n_sites : 0)) {
    if (n_sites < 2) throw ParameterError("n_sites", "must be at least 2");
  }

  int n_sites() const noexcept { return n_; }

  double coupling(int i, int j) const { return couplings_(check(i) - 1, check(j) - 1); }
  double anisotropy(int i, int j) const { return anisotropy_(check(i) - 1, check(j) - 1); }
  double field(int i) const { return fields_(check(i) - 1); }

  void set_coupling(int i, int j, double value) {
    set_pair(couplings_, i, j, value, "coupling");
  }
  void set_anisotropy(int i, int j, double value) {
    set_pair(anisotropy_, i, j, value, "anisotropy");
  }
  void set_field(int i, double value) {
    if (!std::isfinite(value)) throw ParameterError("field", "must be finite");
    fields_(check(i) - 1) = value;
  }

  /// Adds `b` to every local field.
  ChainSpec with_uniform_field(double b) const {
    ChainSpec out = *this;
    out.fields_.array() += b;
    return out;
  }

  /// Zero-based dense views (symmetric, zero diagonal).
  const RealMatrix &couplings() const noexcept { return couplings_; }
  const RealMatrix &anisotropies() const noexcept { return anisotropy_; }
  const RealVector &fields() const noexcept { return fields_; }

  /// Diagonal energy of the configuration with the given 1-based excited
  /// sites, before the vacuum shift.
  double diagonal_energy(const Configuration &excited) const {
    RealVector z = RealVector::Ones(n_);
    for (int s : excited) z(s - 1) = -1.0;
    double e = fields_.dot(z);
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) e += couplings_(i, j) * anisotropy_(i, j) * z(i) * z(j);
    return e;
  }

  double vacuum_energy() const { return diagonal_energy({}); }

  friend bool operator==(const ChainSpec &a, const ChainSpec &b) {
    return a.n_ == b.n_ && a.couplings_ == b.couplings_ && a.anisotropy_ == b.anisotropy_ &&
           a.fields_ == b.fields_;
  }

 private:
  int check(int i) const {
    if (i < 1 || i > n_) {
      throw ParameterError("site", std::to_string(i) + " outside [1, " + std::to_string(n_) + "]");
    }
    return i;
  }

  void set_pair(RealMatrix &m, int i, int j, double value, const char *name) {
    check(i);
    check(j);
    if (i == j) throw ParameterError(name, "diagonal entries are not defined");
    if (!std::isfinite(value)) throw ParameterError(name, "must be finite");
    m(i - 1, j - 1) = value;
    m(j - 1, i - 1) = value;
  }

  int n_;
  RealMatrix couplings_;
  RealMatrix anisotropy_;
  RealVector fields_;
};

/// Sender and receiver weakly coupled to a uniform bulk: J_12 = J_{N-1,N} = J0.
struct WeakCoupling {
  double j0;
};
/// Uniform chain with strong fields B_2 = B_{N-1} = h0.
struct Barrier {
  double h0;
};
/// Engineered couplings J_{i,i+1} = J sqrt(i(N-i)).
struct PerfectTransfer {};

using ProtocolKind = std::variant<WeakCoupling, Barrier, PerfectTransfer>;

inline std::string protocol_name(const ProtocolKind &kind) {
  struct Visitor {
    std::string operator()(const WeakCoupling &) const { return "weak"; }
    std::string operator()(const Barrier &) const { return "barrier"; }
    std::string operator()(const PerfectTransfer &) const { return "perfect"; }
  };
  return std::visit(Visitor{}, kind);
}

/// Initial state of the channel, i.e. everything but the sender.
enum class ChannelInit {
  Vacuum,
  /// (N-2)^{-1/2} sum_{j=2}^{N-1} |j>, one excitation spread over the bulk.
  UniformOneExcitation,
};

/// Nearest-neighbour chain for one of the three protocols, all anisotropies
/// zero. `j` sets the energy scale of the bulk couplings.
inline ChainSpec protocol_preset(const ProtocolKind &kind, int n_sites, double j = 1.0) {
  if (n_sites < 4) {
    throw ParameterError("n_sites", "protocol presets need at least 4 sites, got " +
                                        std::to_string(n_sites));
  }
  ChainSpec spec(n_sites);
  const int n = n_sites;
  if (std::holds_alternative<PerfectTransfer>(kind)) {
    for (int i = 1; i < n; ++i) spec.set_coupling(i, i + 1, j * std::sqrt(double(i) * (n - i)));
    return spec;
  }
  for (int i = 1; i < n; ++i) spec.set_coupling(i, i + 1, j);
  if (const auto *w = std::get_if<WeakCoupling>(&kind)) {
    if (!(w->j0 > 0.0) || !std::isfinite(w->j0)) throw ParameterError("j0", "must be positive");
    spec.set_coupling(1, 2, w->j0);
    spec.set_coupling(n - 1, n, w->j0);
  } else if (const auto *b = std::get_if<Barrier>(&kind)) {
    if (!(b->h0 > 0.0) || !std::isfinite(b->h0)) throw ParameterError("h0", "must be positive");
    spec.set_field(2, b->h0);
    spec.set_field(n - 1, b->h0);
  }
  return spec;
}

/// Restriction of H to one excitation sector, shifted by the vacuum energy.
/// A hop between configurations that differ on one site carries 2 J_ij.
inline RealMatrix sector_hamiltonian(const ChainSpec &spec, const SectorBasis &basis) {
  if (basis.n_sites() != spec.n_sites()) {
    throw ParameterError("basis", "built for " + std::to_string(basis.n_sites()) +
                                      " sites, spec has " + std::to_string(spec.n_sites()));
  }
  const int n = spec.n_sites();
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  const double e_vac = spec.vacuum_energy();
  RealMatrix h = RealMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Configuration &cfg = basis.config_of(static_cast<std::size_t>(k));
    h(k, k) = spec.diagonal_energy(cfg) - e_vac;
    for (std::size_t slot = 0; slot < cfg.size(); ++slot) {
      for (int target = 1; target <= n; ++target) {
        const double jst = spec.coupling(cfg[slot], target);
        if (jst == 0.0) continue;
        if (std::find(cfg.begin(), cfg.end(), target) != cfg.end()) continue;
        Configuration moved = cfg;
        moved[slot] = target;
        std::sort(moved.begin(), moved.end());
        h(static_cast<Eigen::Index>(basis.index_of(moved)), k) += 2.0 * jst;
      }
    }
  }
  return h;
}

}  // namespace qst

#endif  // QST_CHAIN_MODEL_HPP_
