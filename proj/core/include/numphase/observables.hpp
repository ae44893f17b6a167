#pragma once

#include "numphase/fock.hpp"

namespace numphase {

enum class Mode { one = 1, two = 2 };

/// Cutoff-edge mass above which quadrature moments are flagged as biased by truncation.
inline constexpr double kEdgeWarningMass = 1e-8;

struct NumberMoments {
  double n_mean = 0.0;
  double n_var = 0.0;
  double n1_var = 0.0;
  double n2_var = 0.0;
};

struct Dispersions {
  double d2_rel = 1.0;
  double d2_1 = 1.0;
  double d2_2 = 1.0;
};

/// Moments entering the Hillery-Zubairy inequalities.
struct HzMoments {
  Complex adagb;       ///< <a† b>
  double nanb = 0.0;   ///< <a†a b†b>
  double na = 0.0;     ///< <a†a>
  double nb = 0.0;     ///< <b†b>
};

struct QuadratureSum {
  double value = 0.0;  ///< Δ²(X1 − X2) + Δ²(P1 + P2)
  double edge_mass = 0.0;
  bool truncation_warning = false;
};

/// Every scalar moment the criteria consume, for one state.
struct ObservableReport {
  double n_mean = 0.0;
  double n_var = 0.0;
  double n1_var = 0.0;
  double n2_var = 0.0;
  Complex e_rel;
  Complex e1;
  Complex e2;
  double d2_rel = 1.0;
  double d2_1 = 1.0;
  double d2_2 = 1.0;
  Complex hz_adagb;
  double hz_nanb = 0.0;
  double hz_na = 0.0;
  double hz_nb = 0.0;
  double quad_sum = 0.0;
  double quad_edge_mass = 0.0;
  bool quad_truncation_warning = false;
};

/// 1 − |e|², clamped to [0, 1] against rounding.
double dispersion_from_moment(Complex e) noexcept;

NumberMoments number_moments(const PureTwoModeState& state);
/// Law of total variance over sectors.
NumberMoments number_moments(const SectorMixture& mixture);

/// <E> with E = E1 E2† = sum |m, n+1><m+1, n|, evaluated as a coefficient-shift sum.
Complex exp_phase_relative(const PureTwoModeState& state);
Complex exp_phase_relative(const SectorMixture& mixture);

/// <E_j> with the Susskind-Glogower E_j = sum |k><k+1| acting on mode j.
Complex exp_phase_single(const PureTwoModeState& state, Mode mode);
/// Always 0: E_j lowers the total number by one, so it has no matrix
/// elements inside a fixed-N sector and a sector mixture carries no
/// coherence between sectors.
Complex exp_phase_single(const SectorMixture& mixture, Mode mode);

Dispersions dispersions(const PureTwoModeState& state);
Dispersions dispersions(const SectorMixture& mixture);

HzMoments hz_moments(const PureTwoModeState& state);
HzMoments hz_moments(const SectorMixture& mixture);

/// Quadratures X = (a + a†)/√2, P = (a − a†)/(i√2) applied to the truncated
/// state vector (the operators themselves are not truncated).
QuadratureSum quadrature_sum_variance(const PureTwoModeState& state);
/// Exact for sector mixtures: first moments and <ab> vanish, leaving 2<N> + 2.
QuadratureSum quadrature_sum_variance(const SectorMixture& mixture);

ObservableReport observe(const PureTwoModeState& state);
ObservableReport observe(const SectorMixture& mixture);

}  // namespace numphase
