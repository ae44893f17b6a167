// Randomized property checks. Each test seeds its own engine, so a failure
// message with the trial index is enough to reproduce the case.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "numphase/criteria.hpp"
#include "numphase/observables.hpp"
#include "numphase/phase_povm.hpp"
#include "oracle/dense_oracle.hpp"
#include "support/random_states.hpp"

using namespace numphase;

TEST(Property, ShiftSumsMatchDenseOracleOnPureStates) {
  testgen::Engine g(101);
  for (int trial = 0; trial < 40; ++trial) {
    const int cutoff = testgen::uniform_int(g, 0, 8);
    const auto s = testgen::random_pure(g, cutoff);
    const int L = cutoff + 3;
    const auto want = oracle::moments(oracle::density(s, L), L);
    const auto r = observe(s);
    EXPECT_NEAR(std::abs(r.e_rel - want.e_rel), 0.0, 1e-12) << trial;
    EXPECT_NEAR(std::abs(r.e1 - want.e1), 0.0, 1e-12) << trial;
    EXPECT_NEAR(std::abs(r.e2 - want.e2), 0.0, 1e-12) << trial;
    EXPECT_NEAR(std::abs(r.hz_adagb - want.adagb), 0.0, 1e-12) << trial;
    EXPECT_NEAR(r.hz_nanb, want.nanb, 1e-12) << trial;
    EXPECT_NEAR(r.quad_sum, want.quad_sum, 1e-12) << trial;
    EXPECT_NEAR(r.n_var, want.n_var, 1e-12) << trial;
  }
}

TEST(Property, ModuliBoundedByOne) {
  testgen::Engine g(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = observe(testgen::random_pure(g, testgen::uniform_int(g, 0, 10)));
    EXPECT_LE(std::abs(r.e_rel), 1 + 1e-14);
    EXPECT_LE(std::abs(r.e1), 1 + 1e-14);
    EXPECT_LE(std::abs(r.e2), 1 + 1e-14);
  }
}

TEST(Property, PhaseCovariance) {
  testgen::Engine g(9);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = testgen::uniform_int(g, 0, 30);
    const double phi = testgen::uniform(g, -3, 3);
    const double delta = testgen::uniform(g, -3, 3);
    const auto a = observe(number_phase_state(n, phi));
    const auto b = observe(number_phase_state(n, phi + delta));
    EXPECT_NEAR(std::abs(b.e_rel - a.e_rel * std::polar(1.0, delta)), 0.0, 1e-13);
    EXPECT_NEAR(a.d2_rel, b.d2_rel, 1e-14);
  }
}

TEST(Property, ProductStatesFactorizeAndCompose) {
  testgen::Engine g(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = testgen::random_product(g, testgen::uniform_int(g, 0, 10));
    const auto r = observe(s);
    EXPECT_NEAR(std::abs(r.e_rel - r.e1 * std::conj(r.e2)), 0.0, 1e-12) << trial;
    EXPECT_NEAR(r.d2_rel, r.d2_1 + r.d2_2 - r.d2_1 * r.d2_2, 1e-12) << trial;
  }
}

TEST(Property, ProductStatesNeverFlagged) {
  testgen::Engine g(17);
  for (int trial = 0; trial < 300; ++trial) {
    const auto r = observe(testgen::random_product(g, 10));
    EXPECT_GE(np_entanglement(r).margin, -1e-10) << trial;
    EXPECT_GE(np_steering(r).margin, -1e-10) << trial;
    // Intermediate steps of the separability argument: each mode obeys the
    // single-mode relation, and Δ²N splits into the local variances.
    EXPECT_NEAR(r.n_var, r.n1_var + r.n2_var, 1e-9 * (1 + r.n_var));
    EXPECT_GE(single_mode_ur_check(r.n1_var, r.d2_1).margin, -1e-10);
    EXPECT_GE(single_mode_ur_check(r.n2_var, r.d2_2).margin, -1e-10);
  }
}

TEST(Property, MixtureConcavityOfDispersion) {
  testgen::Engine g(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mix = testgen::random_mixture(g, 12);
    double avg = 0;
    for (const auto& sec : mix.sectors()) avg += sec.weight * dispersions(sec.state.to_pure()).d2_rel;
    EXPECT_GE(dispersions(mix).d2_rel, avg - 1e-12) << trial;
  }
}

TEST(Property, MixtureMomentsMatchDenseOracle) {
  testgen::Engine g(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mix = testgen::random_mixture(g, 7);
    const int L = mix.max_total_number() + 3;
    const auto want = oracle::moments(oracle::density(mix, L), L);
    const auto r = observe(mix);
    EXPECT_NEAR(std::abs(r.e_rel - want.e_rel), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(r.e1 - want.e1), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(r.hz_adagb - want.adagb), 0.0, 1e-12);
    EXPECT_NEAR(r.hz_nanb, want.nanb, 1e-12);
    EXPECT_NEAR(r.quad_sum, want.quad_sum, 1e-12);
    EXPECT_NEAR(r.n_var, want.n_var, 1e-12);
  }
}

TEST(Property, DensityMomentAndNormalization) {
  testgen::Engine g(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int cutoff = testgen::uniform_int(g, 0, 20);
    const auto s = testgen::random_pure(g, cutoff);
    const auto d = relative_phase_density(s, default_grid_size(cutoff));
    EXPECT_NEAR(d.integral(), 1.0, 1e-8);
    EXPECT_NEAR(std::abs(d.trig_moment(1) - exp_phase_relative(s)), 0.0, 1e-8);
    for (double v : d.values()) EXPECT_GE(v, 0.0);
  }
}

TEST(Property, JointMarginalizationReproducesRelative) {
  testgen::Engine g(37);
  for (int trial = 0; trial < 20; ++trial) {
    const int cutoff = testgen::uniform_int(g, 0, 12);
    const auto s = testgen::random_pure(g, cutoff);
    const int K = default_grid_size(cutoff);
    const auto rel = relative_phase_density(s, K);
    const auto joint = joint_local_phase_density(s, K);
    EXPECT_NEAR(joint.integral(), 1.0, 1e-8);
    const auto marg = joint.relative_marginal();
    for (int k = 0; k < K; ++k) EXPECT_NEAR(marg.values()[k], rel.values()[k], 1e-6);
  }
}

TEST(Property, SteeringViolationImpliesEntanglementViolation) {
  testgen::Engine g(41);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = observe(testgen::random_pure(g, testgen::uniform_int(g, 0, 8)));
    if (np_steering(r).violated) EXPECT_TRUE(np_entanglement(r).violated);
  }
}
