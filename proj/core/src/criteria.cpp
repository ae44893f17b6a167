#include "numphase/criteria.hpp"

#include <array>
#include <cmath>
#include <string>

#include "numphase/errors.hpp"

namespace numphase {

namespace {

constexpr std::array<std::pair<CriterionId, std::string_view>, 8> kCriterionNames{{
    {CriterionId::np_ent, "NP_ENT"},
    {CriterionId::np_steer, "NP_STEER"},
    {CriterionId::naive_ent, "NAIVE_ENT"},
    {CriterionId::naive_steer, "NAIVE_STEER"},
    {CriterionId::hz_ent, "HZ_ENT"},
    {CriterionId::hz_steer_a_by_b, "HZ_STEER_A_BY_B"},
    {CriterionId::hz_steer_b_by_a, "HZ_STEER_B_BY_A"},
    {CriterionId::sm_ur, "SM_UR"},
}};

}  // namespace

std::string_view to_string(CriterionId id) noexcept {
  for (const auto& [k, name] : kCriterionNames) {
    if (k == id) return name;
  }
  return "UNKNOWN";
}

std::optional<CriterionId> criterion_from_string(std::string_view name) noexcept {
  for (const auto& [k, n] : kCriterionNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

Orientation orientation(CriterionId id) noexcept {
  switch (id) {
    case CriterionId::hz_ent:
    case CriterionId::hz_steer_a_by_b:
    case CriterionId::hz_steer_b_by_a:
      return Orientation::upper_bound;
    default:
      return Orientation::lower_bound;
  }
}

CriterionVerdict make_verdict(CriterionId id, double lhs, double bound, double tol) {
  CriterionVerdict v;
  v.id = id;
  v.lhs = lhs;
  v.bound = bound;
  v.margin = orientation(id) == Orientation::lower_bound ? lhs - bound : bound - lhs;
  v.violated = v.margin < -tol;
  return v;
}

CriterionVerdict np_entanglement(const ObservableReport& report, double tol) {
  return make_verdict(CriterionId::np_ent, (report.n_var + 1.0) * report.d2_rel, 1.0, tol);
}

CriterionVerdict np_steering(const ObservableReport& report, double tol) {
  return make_verdict(CriterionId::np_steer, (report.n_var + 0.25) * report.d2_rel, 0.25, tol);
}

NaiveVerdicts naive_criteria(const ObservableReport& report, const PhaseDensity& density, double tol) {
  const double lhs = report.n_var + linear_phase_variance(density);
  NaiveVerdicts out;
  out.applicable = report.d2_rel <= kNaiveApplicabilityD2;
  out.entanglement = make_verdict(CriterionId::naive_ent, lhs, 2.0, tol);
  out.steering = make_verdict(CriterionId::naive_steer, lhs, 1.0, tol);
  out.entanglement.advisory = !out.applicable;
  out.steering.advisory = !out.applicable;
  return out;
}

HzVerdicts hz_criteria(const ObservableReport& report, double tol) {
  const double lhs = std::norm(report.hz_adagb);
  return {make_verdict(CriterionId::hz_ent, lhs, report.hz_nanb, tol),
          make_verdict(CriterionId::hz_steer_a_by_b, lhs, report.hz_nanb + 0.5 * report.hz_na, tol),
          make_verdict(CriterionId::hz_steer_b_by_a, lhs, report.hz_nanb + 0.5 * report.hz_nb, tol)};
}

CriterionVerdict single_mode_ur_check(double n_var_j, double d2_j, double tol) {
  if (!(d2_j >= 0.0 && d2_j <= 1.0)) throw DomainError("phase dispersion must lie in [0,1]");
  if (!(n_var_j >= 0.0)) throw DomainError("number variance must be non-negative");
  return make_verdict(CriterionId::sm_ur, (n_var_j + 0.25) * d2_j, 0.25, tol);
}

std::vector<CriterionVerdict> evaluate_all(const ObservableReport& report, const PhaseDensity* density,
                                           double tol) {
  std::vector<CriterionVerdict> out;
  out.push_back(np_entanglement(report, tol));
  out.push_back(np_steering(report, tol));
  if (density != nullptr) {
    auto naive = naive_criteria(report, *density, tol);
    out.push_back(naive.entanglement);
    out.push_back(naive.steering);
  }
  const auto hz = hz_criteria(report, tol);
  out.push_back(hz.entanglement);
  out.push_back(hz.steer_a_by_b);
  out.push_back(hz.steer_b_by_a);
  return out;
}

CriterionVerdict sampled_np_verdict(CriterionId id, double n_var, double d2_hat, double d2_std_error,
                                    double z_score) {
  double offset = 0.0;
  double bound = 0.0;
  if (id == CriterionId::np_ent) {
    offset = 1.0;
    bound = 1.0;
  } else if (id == CriterionId::np_steer) {
    offset = 0.25;
    bound = 0.25;
  } else {
    throw DomainError("sampled verdicts are defined for NP_ENT and NP_STEER only");
  }
  const double lhs = (n_var + offset) * d2_hat;
  const double se = (n_var + offset) * d2_std_error;
  auto v = make_verdict(id, lhs, bound, 0.0);
  // Slack of the upper confidence limit, so margin < 0 exactly when violated.
  v.margin = lhs + z_score * se - bound;
  v.violated = v.margin < 0.0;
  return v;
}

std::string_view to_string(CurveId id) noexcept {
  switch (id) {
    case CurveId::ent_fig2:
      return "ENT_FIG2";
    case CurveId::steer_fig2:
      return "STEER_FIG2";
    case CurveId::ur_fig1:
      return "UR_FIG1";
  }
  return "UNKNOWN";
}

BoundaryCurve boundary_curves(CurveId which, std::span<const double> d2_grid) {
  BoundaryCurve c;
  c.id = which;
  c.d2.assign(d2_grid.begin(), d2_grid.end());
  c.values.reserve(d2_grid.size());
  for (double d2 : d2_grid) {
    if (!(d2 > 0.0 && d2 <= 1.0)) {
      throw DomainError("boundary curves need D^2 in (0,1], got " + std::to_string(d2));
    }
    switch (which) {
      case CurveId::ent_fig2:
        c.values.push_back(1.0 / d2 - 1.0);
        break;
      case CurveId::steer_fig2:
        c.values.push_back(0.25 / d2 - 0.25);
        break;
      case CurveId::ur_fig1:
        c.values.push_back(0.25 / d2 - 0.25 + d2);
        break;
    }
  }
  return c;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 1) throw DomainError("grid needs at least one point");
  if (!(hi >= lo)) throw DomainError("grid upper end below lower end");
  std::vector<double> g(static_cast<std::size_t>(points));
  if (points == 1) {
    g[0] = lo;
    return g;
  }
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = lo + step * i;
  g.back() = hi;
  return g;
}

}  // namespace numphase
