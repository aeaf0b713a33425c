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


#include "qst/channel.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "qst/dynamics.hpp"
#include "qst/errors.hpp"
#include "qst/fidelity_analytics.hpp"
#include "qst/oracle.hpp"
#include "test_util.hpp"

namespace qst {
namespace {

const std::vector<ProtocolKind> kPresets{WeakCoupling{0.3}, Barrier{4.0}, PerfectTransfer{}};

ComplexVector basis_vector(int dim, int k) {
  ComplexVector v = ComplexVector::Zero(dim);
  v(k) = 1.0;
  return v;
}

TEST(Channel, Geometry) {
  const ChannelGeometry g = channel_geometry(Scenario::TwoQubitVacuum, 9);
  EXPECT_EQ(g.sender, (std::vector<int>{1, 2}));
  EXPECT_EQ(g.receiver, (std::vector<int>{8, 9}));
  const ChannelGeometry u = channel_geometry(Scenario::OneQubitUniform, 6);
  ASSERT_EQ(u.complement_state.size(), 4U);
  double norm = 0.0;
  for (const auto &[cfg, w] : u.complement_state) {
    ASSERT_EQ(cfg.size(), 1U);
    EXPECT_GE(cfg[0], 2);
    EXPECT_LE(cfg[0], 5);
    norm += std::norm(w);
  }
  EXPECT_NEAR(norm, 1.0, 1e-15);
  EXPECT_THROW(channel_geometry(Scenario::TwoQubitVacuum, 4), ParameterError);
  EXPECT_THROW(channel_geometry(Scenario::OneQubitUniform, 3), ParameterError);
}

TEST(Channel, NominalCounts) {
  EXPECT_EQ(nominal_kraus_count(Scenario::TwoQubitVacuum, 9), 29U);
  EXPECT_EQ(nominal_kraus_count(Scenario::OneQubitVacuum, 9), 2U);
  const AmplitudeTable amps = amplitudes_at(protocol_preset(Barrier{4.0}, 9), 1.3);
  for (Scenario s :
       {Scenario::OneQubitVacuum, Scenario::OneQubitUniform, Scenario::TwoQubitVacuum}) {
    const KrausSet k = build_kraus(amps, s);
    EXPECT_EQ(k.nominal_count, nominal_kraus_count(s, 9)) << scenario_name(s);
    EXPECT_LE(k.operators.size(), k.nominal_count);
  }
}

TEST(Channel, VacuumAtTimeZeroResetsReceiver) {
  const AmplitudeTable amps = amplitudes_at(protocol_preset(WeakCoupling{0.3}, 6), 0.0);
  const KrausSet k = build_kraus(amps, Scenario::OneQubitVacuum);
  ASSERT_EQ(k.operators.size(), 2U);
  // Nothing has arrived at t = 0: the receiver stays in |0>.
  EXPECT_LT(std::abs(k.operators[0](1, 1)), 1e-14);
  EXPECT_LT(std::abs(k.operators[1](0, 1) - 1.0), 1e-14);
  const KrausSet ideal = kraus_one_qubit_vacuum(complex_t(1.0));
  ASSERT_EQ(ideal.operators.size(), 1U);
  EXPECT_EQ(ideal.nominal_count, 2U);
  EXPECT_NEAR(fidelity(k, basis_vector(2, 0)), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(k, basis_vector(2, 1)), 0.0, 1e-15);
}

TEST(Channel, VacuumFidelityOfExcitedInput) {
  const ChainDynamics dyn(protocol_preset(Barrier{4.0}, 8));
  for (double t : {0.4, 1.9, 6.0}) {
    const AmplitudeTable amps = dyn.amplitudes_at(t);
    const KrausSet k = build_kraus(amps, Scenario::OneQubitVacuum);
    EXPECT_NEAR(fidelity(k, basis_vector(2, 1)), std::norm(amps.a(1, 8)), 1e-13);
    EXPECT_NEAR(fidelity(k, basis_vector(2, 0)), 1.0, 1e-13);
    // Lumped form and definition agree as channels.
    const KrausSet def = make_kraus_set(
        kraus_from_definition(amps, channel_geometry(Scenario::OneQubitVacuum, 8)),
        Scenario::OneQubitVacuum, t);
    RandomStream rng(3, 0);
    for (int r = 0; r < 5; ++r) {
      const ComplexVector psi = testing::random_state(2, rng);
      EXPECT_LT(trace_distance(apply_channel(k, psi), apply_channel(def, psi)), 1e-13);
    }
  }
}

TEST(Channel, TwoQubitOperatorStructure) {
  const int n = 7;
  const AmplitudeTable amps = amplitudes_at(protocol_preset(PerfectTransfer{}, n), 0.6);
  const KrausSet k = build_kraus(amps, Scenario::TwoQubitVacuum);
  const ComplexMatrix &e0 = k.operators.front();
  // Bits: sender (1, 2) and receiver (N-1, N), first site most significant.
  EXPECT_EQ(e0(0, 0), complex_t(1.0));
  EXPECT_EQ(e0(1, 1), amps.a(2, n));
  EXPECT_EQ(e0(1, 2), amps.a(1, n));
  EXPECT_EQ(e0(2, 1), amps.a(2, n - 1));
  EXPECT_EQ(e0(2, 2), amps.a(1, n - 1));
  EXPECT_EQ(e0(3, 3), amps.b(1, 2, n - 1, n));
  EXPECT_EQ(e0(0, 3), complex_t(0.0));
  EXPECT_EQ(e0(3, 0), complex_t(0.0));
}

TEST(Channel, TwoQubitVacuumInputAlwaysArrives) {
  const ChainDynamics dyn(protocol_preset(WeakCoupling{0.3}, 9));
  for (double t : {0.0, 0.8, 13.0}) {
    const KrausSet k = build_kraus(dyn.amplitudes_at(t), Scenario::TwoQubitVacuum);
    EXPECT_NEAR(fidelity(k, basis_vector(4, 0)), 1.0, 1e-13);
  }
  const KrausSet k0 = build_kraus(dyn.amplitudes_at(0.0), Scenario::TwoQubitVacuum);
  EXPECT_NEAR(fidelity(k0, basis_vector(4, 3)), 0.0, 1e-15);
}

TEST(Channel, UniformAtTimeZero) {
  const int n = 6;
  const KrausSet k = build_kraus(amplitudes_at(protocol_preset(Barrier{4.0}, n), 0.0),
                                 Scenario::OneQubitUniform);
  // Receiver starts in |0> whatever the input.
  for (int s = 0; s < 2; ++s) {
    const ComplexMatrix rho = apply_channel(k, basis_vector(2, s));
    EXPECT_NEAR(std::abs(rho(0, 0) - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(rho(1, 1)), 0.0, 1e-14);
  }
}

TEST(Channel, CompletenessAcrossPresetsAndScenarios) {
  RandomStream rng(21, 0);
  for (const auto &kind : kPresets) {
    for (int n = 5; n <= 12; ++n) {
      const ChainDynamics dyn(protocol_preset(kind, n));
      for (int r = 0; r < 3; ++r) {
        const AmplitudeTable amps = dyn.amplitudes_at(20.0 * rng.uniform());
        for (Scenario s :
             {Scenario::OneQubitVacuum, Scenario::OneQubitUniform, Scenario::TwoQubitVacuum}) {
          const KrausSet k = build_kraus(amps, s);
          EXPECT_LE(k.completeness_defect, 1e-9);
          EXPECT_EQ(k.completeness_defect, completeness_defect(k.operators, k.dimension()));
        }
      }
    }
  }
}

TEST(Channel, OutputsArePhysicalStates) {
  RandomStream rng(22, 0);
  const AmplitudeTable amps = amplitudes_at(testing::random_network(9, rng), 2.2);
  for (Scenario s :
       {Scenario::OneQubitVacuum, Scenario::OneQubitUniform, Scenario::TwoQubitVacuum}) {
    const KrausSet k = build_kraus(amps, s);
    for (int r = 0; r < 20; ++r) {
      const ComplexMatrix rho = apply_channel(k, testing::random_state(k.dimension(), rng));
      EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
      EXPECT_LT(max_abs(ComplexMatrix(rho - rho.adjoint())), 1e-14);
      EXPECT_GT(min_eigenvalue(rho), -1e-12);
    }
  }
}

TEST(Channel, FidelityDuality) {
  RandomStream rng(23, 0);
  for (int n : {5, 8, 11}) {
    const AmplitudeTable amps = amplitudes_at(testing::random_network(n, rng), 3.0 * rng.uniform());
    for (Scenario s :
         {Scenario::OneQubitVacuum, Scenario::OneQubitUniform, Scenario::TwoQubitVacuum}) {
      const KrausSet k = build_kraus(amps, s);
      for (int r = 0; r < 10; ++r) {
        const ComplexVector psi = testing::random_state(k.dimension(), rng);
        const double f = fidelity(k, psi);
        EXPECT_NEAR(f, fidelity_overlap(k, psi), 1e-12);
        EXPECT_GE(f, 0.0);
        EXPECT_LE(f, 1.0);
      }
    }
  }
}

TEST(Channel, AgreesWithFullSpaceOracle) {
  RandomStream rng(24, 0);
  for (const auto &kind : kPresets) {
    const int n = 7;
    const ChainSpec spec = protocol_preset(kind, n);
    const ChainDynamics dyn(spec);
    const FullOracle oracle(spec);
    const double t = 5.0 * rng.uniform();
    const AmplitudeTable amps = dyn.amplitudes_at(t);
    for (Scenario s :
         {Scenario::OneQubitVacuum, Scenario::OneQubitUniform, Scenario::TwoQubitVacuum}) {
      const KrausSet k = build_kraus(amps, s);
      const auto inputs =
          tomographic_inputs(s, testing::random_state(qubit_dimension(s), rng));
      for (const auto &psi : inputs) {
        EXPECT_LT(trace_distance(apply_channel(k, psi), oracle_receiver_state(oracle, s, psi, t)),
                  1e-9)
            << protocol_name(kind) << " " << scenario_name(s);
      }
    }
  }
}

TEST(Channel, PerfectTransferIsUnitaryUpToPhase) {
  const int n = 10;
  const AmplitudeTable amps = amplitudes_at(protocol_preset(PerfectTransfer{}, n), kPi / 4.0);
  const KrausSet k = build_kraus(amps, Scenario::OneQubitVacuum);
  RandomStream rng(25, 0);
  for (int r = 0; r < 5; ++r) {
    EXPECT_NEAR(purity(apply_channel(k, testing::random_state(2, rng))), 1.0, 1e-10);
  }
  // With the uniform field that cancels the arrival phase it is the identity.
  const double b = aux_field_for(amps.a(1, n), kPi / 4.0);
  const KrausSet fixed = build_kraus(amps.with_uniform_field(b), Scenario::OneQubitVacuum);
  for (int r = 0; r < 5; ++r) {
    EXPECT_NEAR(fidelity(fixed, testing::random_state(2, rng)), 1.0, 1e-10);
  }
}

TEST(Channel, InputValidation) {
  const KrausSet k = kraus_one_qubit_vacuum(complex_t(0.6, 0.0));
  ComplexVector bad(2);
  bad << 1.0, 1.0;
  EXPECT_THROW(apply_channel(k, bad), ParameterError);
  EXPECT_THROW(fidelity(k, basis_vector(4, 0)), ParameterError);
  EXPECT_THROW(kraus_one_qubit_vacuum(complex_t(1.1, 0.0)), ParameterError);
  std::vector<ComplexMatrix> broken{ComplexMatrix::Identity(2, 2) * 1.1};
  EXPECT_THROW(make_kraus_set(broken, Scenario::OneQubitVacuum, 0.0), NumericError);
  EXPECT_THROW(clamp_fidelity(1.1), NumericError);
  EXPECT_EQ(clamp_fidelity(1.0 + 1e-12), 1.0);
}

}  // namespace
}  // namespace qst
