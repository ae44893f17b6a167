#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "numphase/observables.hpp"
#include "numphase/phase_povm.hpp"

namespace numphase {

enum class CriterionId {
  np_ent,            ///< (Δ²N + 1) D² ≥ 1
  np_steer,          ///< (Δ²N + 1/4) D² ≥ 1/4, two-way
  naive_ent,         ///< Δ²N + Δ²φ ≥ 2
  naive_steer,       ///< Δ²N + Δ²φ ≥ 1
  hz_ent,            ///< |<a†b>|² ≤ <a†a b†b>
  hz_steer_a_by_b,   ///< |<a†b>|² ≤ <a†a (b†b + 1/2)>
  hz_steer_b_by_a,   ///< |<a†b>|² ≤ <(a†a + 1/2) b†b>
  sm_ur,             ///< (Δ²N_j + 1/4) D_j² ≥ 1/4
};

std::string_view to_string(CriterionId id) noexcept;
std::optional<CriterionId> criterion_from_string(std::string_view name) noexcept;

/// Criteria of the form lhs ≥ bound (NP, naive, UR) are violated when lhs
/// drops below it; HZ criteria lhs ≤ bound are violated when lhs exceeds it.
enum class Orientation { lower_bound, upper_bound };

Orientation orientation(CriterionId id) noexcept;

inline constexpr double kVerdictTol = 1e-12;

struct CriterionVerdict {
  CriterionId id{};
  double lhs = 0.0;
  double bound = 0.0;
  /// Slack of the inequality: lhs − bound for lower-bound criteria, bound − lhs
  /// for upper-bound ones. Negative beyond tolerance means violated.
  double margin = 0.0;
  bool violated = false;
  /// Set for naive criteria outside the small-fluctuation regime.
  std::optional<bool> advisory;
};

CriterionVerdict make_verdict(CriterionId id, double lhs, double bound, double tol = kVerdictTol);

/// Violation of (Δ²N + 1) D² ≥ 1 certifies entanglement.
CriterionVerdict np_entanglement(const ObservableReport& report, double tol = kVerdictTol);

/// Violation of (Δ²N + 1/4) D² ≥ 1/4 certifies two-way steering.
CriterionVerdict np_steering(const ObservableReport& report, double tol = kVerdictTol);

/// Naive criteria are trusted only while D² stays below this value.
inline constexpr double kNaiveApplicabilityD2 = 0.1;

struct NaiveVerdicts {
  CriterionVerdict entanglement;
  CriterionVerdict steering;
  bool applicable = false;
};

/// lhs = Δ²N + linear phase variance of `density` (which must come from the same state).
NaiveVerdicts naive_criteria(const ObservableReport& report, const PhaseDensity& density,
                             double tol = kVerdictTol);

struct HzVerdicts {
  CriterionVerdict entanglement;
  CriterionVerdict steer_a_by_b;
  CriterionVerdict steer_b_by_a;
};

HzVerdicts hz_criteria(const ObservableReport& report, double tol = kVerdictTol);

/// Single-mode number-phase uncertainty relation; never violated by a physical state.
/// Throws DomainError for d2_j outside [0,1] or negative n_var_j.
CriterionVerdict single_mode_ur_check(double n_var_j, double d2_j, double tol = kVerdictTol);

/// Every correlation criterion evaluated on one report, in CriterionId order
/// (SM_UR excluded). The naive pair is only present when a density is given.
std::vector<CriterionVerdict> evaluate_all(const ObservableReport& report,
                                           const PhaseDensity* density = nullptr,
                                           double tol = kVerdictTol);

/// Verdict from a Monte-Carlo dispersion estimate: a lower-bound criterion
/// counts as violated only if lhs + z * se(lhs) < bound. The margin is
/// lhs + z * se(lhs) − bound.
CriterionVerdict sampled_np_verdict(CriterionId id, double n_var, double d2_hat, double d2_std_error,
                                    double z_score = 5.0);

enum class CurveId { ent_fig2, steer_fig2, ur_fig1 };

std::string_view to_string(CurveId id) noexcept;

struct BoundaryCurve {
  CurveId id{};
  std::vector<double> d2;
  std::vector<double> values;
};

/// ENT_FIG2: Δ²N threshold 1/D² − 1. STEER_FIG2: 1/(4D²) − 1/4.
/// UR_FIG1: lower bound 1/(4D²) − 1/4 + D² on Δ²N_j + D_j².
/// Throws DomainError for grid points outside (0, 1].
BoundaryCurve boundary_curves(CurveId which, std::span<const double> d2_grid);

/// `points` values evenly spaced on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, int points);

}  // namespace numphase
