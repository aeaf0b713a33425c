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


#include "qst/chain_model.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "qst/dynamics.hpp"
#include "qst/errors.hpp"
#include "test_util.hpp"

namespace qst {
namespace {

TEST(ChainModel, PerfectPresetCouplings) {
  const ChainSpec spec = protocol_preset(PerfectTransfer{}, 4);
  EXPECT_DOUBLE_EQ(spec.coupling(1, 2), std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(spec.coupling(2, 3), 2.0);
  EXPECT_DOUBLE_EQ(spec.coupling(3, 4), std::sqrt(3.0));
  EXPECT_EQ(spec.coupling(1, 3), 0.0);
  EXPECT_EQ(spec.fields().squaredNorm(), 0.0);
  EXPECT_EQ(spec.anisotropies().squaredNorm(), 0.0);
}

TEST(ChainModel, WeakAndBarrierPresets) {
  const ChainSpec w = protocol_preset(WeakCoupling{1.0 / 200.0}, 22);
  EXPECT_EQ(w.coupling(1, 2), 0.005);
  EXPECT_EQ(w.coupling(21, 22), 0.005);
  for (int i = 2; i < 21; ++i) EXPECT_EQ(w.coupling(i, i + 1), 1.0);
  EXPECT_EQ(w.fields().squaredNorm(), 0.0);

  const ChainSpec b = protocol_preset(Barrier{200.0}, 22);
  for (int i = 1; i < 22; ++i) EXPECT_EQ(b.coupling(i, i + 1), 1.0);
  for (int i = 1; i <= 22; ++i) EXPECT_EQ(b.field(i), (i == 2 || i == 21) ? 200.0 : 0.0);
}

TEST(ChainModel, PresetValidation) {
  EXPECT_THROW(protocol_preset(PerfectTransfer{}, 3), ParameterError);
  EXPECT_THROW(protocol_preset(WeakCoupling{0.0}, 8), ParameterError);
  EXPECT_THROW(protocol_preset(Barrier{-1.0}, 8), ParameterError);
  ChainSpec spec(4);
  EXPECT_THROW(spec.set_coupling(2, 2, 1.0), ParameterError);
  EXPECT_THROW(spec.set_coupling(1, 5, 1.0), ParameterError);
  EXPECT_THROW(spec.set_field(1, std::nan("")), ParameterError);
  EXPECT_THROW(ChainSpec(1), ParameterError);
}

TEST(ChainModel, TwoSiteOneExcitationMatrix) {
  ChainSpec spec(2);
  spec.set_coupling(1, 2, 1.0);
  const RealMatrix h = sector_hamiltonian(spec, SectorBasis(2, 1));
  RealMatrix expected(2, 2);
  expected << 0.0, 2.0, 2.0, 0.0;
  EXPECT_EQ(h, expected);
}

TEST(ChainModel, VacuumShiftAndFieldDiagonal) {
  const ChainSpec spec = protocol_preset(Barrier{200.0}, 22);
  const RealMatrix h0 = sector_hamiltonian(spec, SectorBasis(22, 0));
  ASSERT_EQ(h0.size(), 1);
  EXPECT_EQ(h0(0, 0), 0.0);
  const RealMatrix h1 = sector_hamiltonian(spec, SectorBasis(22, 1));
  for (int m = 1; m <= 22; ++m) EXPECT_DOUBLE_EQ(h1(m - 1, m - 1), -2.0 * spec.field(m));
  const RealMatrix h2 = sector_hamiltonian(spec, SectorBasis(22, 2));
  const SectorBasis b2(22, 2);
  EXPECT_DOUBLE_EQ(h2(Eigen::Index(b2.index_of({2, 21})), Eigen::Index(b2.index_of({2, 21}))),
                   -800.0);
}

TEST(ChainModel, AnisotropyDiagonal) {
  // Flipping spin i changes each Z_i Z_j term with j adjacent by -2.
  ChainSpec spec(3);
  spec.set_coupling(1, 2, 1.0);
  spec.set_coupling(2, 3, 1.0);
  spec.set_anisotropy(1, 2, 0.5);
  spec.set_anisotropy(2, 3, 0.5);
  const RealMatrix h1 = sector_hamiltonian(spec, SectorBasis(3, 1));
  EXPECT_DOUBLE_EQ(h1(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(h1(1, 1), -2.0);
  EXPECT_DOUBLE_EQ(h1(2, 2), -1.0);
  const RealMatrix h2 = sector_hamiltonian(spec, SectorBasis(3, 2));
  // (1,3): both bonds anti-aligned; (1,2): one bond.
  EXPECT_DOUBLE_EQ(h2(1, 1), -2.0);
  EXPECT_DOUBLE_EQ(h2(0, 0), -1.0);
}

TEST(ChainModel, TwoExcitationHoppingRespectsOccupation) {
  const ChainSpec spec = protocol_preset(PerfectTransfer{}, 5);
  const SectorBasis b2(5, 2);
  const RealMatrix h2 = sector_hamiltonian(spec, b2);
  auto at = [&](Configuration to, Configuration from) {
    return h2(Eigen::Index(b2.index_of(to)), Eigen::Index(b2.index_of(from)));
  };
  EXPECT_DOUBLE_EQ(at({1, 3}, {1, 2}), 2.0 * spec.coupling(2, 3));
  EXPECT_DOUBLE_EQ(at({2, 4}, {2, 3}), 2.0 * spec.coupling(3, 4));
  EXPECT_EQ(at({2, 3}, {1, 2}), 0.0);
  EXPECT_EQ(at({3, 4}, {1, 2}), 0.0);
}

TEST(ChainModel, SectorMatricesSymmetric) {
  RandomStream rng(5, 0);
  for (int n : {4, 7, 12}) {
    const ChainSpec spec = testing::random_network(n, rng);
    for (int q = 0; q <= 2; ++q) {
      EXPECT_EQ(symmetry_defect(sector_hamiltonian(spec, SectorBasis(n, q))), 0.0);
    }
  }
  EXPECT_THROW(sector_hamiltonian(protocol_preset(PerfectTransfer{}, 6), SectorBasis(5, 1)),
               ParameterError);
}

TEST(ChainModel, PerfectSpectrumEquallySpaced) {
  for (int n = 4; n <= 22; ++n) {
    const RealMatrix h = sector_hamiltonian(protocol_preset(PerfectTransfer{}, n), SectorBasis(n, 1));
    const SpectralPropagator p = diagonalize(h);
    const RealVector &w = p.eigenvalues();
    for (Eigen::Index k = 1; k < w.size(); ++k) {
      EXPECT_NEAR(w(k) - w(k - 1), 4.0, 1e-9) << "N=" << n;
    }
  }
}

TEST(ChainModel, UniformFieldShift) {
  const ChainSpec spec = protocol_preset(WeakCoupling{0.1}, 6);
  const ChainSpec shifted = spec.with_uniform_field(0.25);
  for (int i = 1; i <= 6; ++i) EXPECT_EQ(shifted.field(i), 0.25);
  const RealMatrix d = sector_hamiltonian(shifted, SectorBasis(6, 1)) -
                       sector_hamiltonian(spec, SectorBasis(6, 1));
  EXPECT_NEAR(max_abs(RealMatrix(d + 0.5 * RealMatrix::Identity(6, 6))), 0.0, 1e-15);
}

}  // namespace
}  // namespace qst
