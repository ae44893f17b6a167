#pragma once

#include <ostream>
#include <span>
#include <string>

#include "numphase/criteria.hpp"
#include "numphase/observables.hpp"
#include "numphase/phase_povm.hpp"

namespace numphase {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

/// Column order of the report CSV row; the JSON object uses the same keys in the same order.
std::span<const std::string_view> report_fields() noexcept;

std::string report_csv_header();
std::string report_csv_row(const ObservableReport& report);
std::string report_json(const ObservableReport& report, int indent = 2);

std::string verdict_json(const CriterionVerdict& verdict, int indent = -1);
std::string verdicts_json(std::span<const CriterionVerdict> verdicts, int indent = 2);
std::string verdicts_csv(std::span<const CriterionVerdict> verdicts);

/// One line per verdict, e.g. "NP_ENT       VIOLATED   lhs=0.75 bound=1 margin=-0.25".
std::string verdict_summary(const CriterionVerdict& verdict);

/// Columns phi,p.
void write_density_csv(std::ostream& out, const PhaseDensity& density);

/// Columns shot_index,phi1,phi2.
void write_samples_csv(std::ostream& out, const LocalPhaseSamples& samples);

/// Columns d2,threshold.
void write_curve_csv(std::ostream& out, const BoundaryCurve& curve);

}  // namespace numphase
