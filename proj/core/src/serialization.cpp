#include "numphase/serialization.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace numphase {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 21> kReportFields{
    "n_mean",   "n_var",      "n1_var",      "n2_var",   "e_rel_re", "e_rel_im",
    "e1_re",    "e1_im",      "e2_re",       "e2_im",    "d2_rel",   "d2_1",
    "d2_2",     "hz_adagb_re", "hz_adagb_im", "hz_nanb", "hz_na",    "hz_nb",
    "quad_sum", "quad_edge_mass", "quad_truncation_warning"};

std::array<double, 20> report_numbers(const ObservableReport& r) {
  return {r.n_mean,      r.n_var,       r.n1_var,  r.n2_var, r.e_rel.real(), r.e_rel.imag(),
          r.e1.real(),   r.e1.imag(),   r.e2.real(), r.e2.imag(), r.d2_rel,  r.d2_1,
          r.d2_2,        r.hz_adagb.real(), r.hz_adagb.imag(), r.hz_nanb, r.hz_na, r.hz_nb,
          r.quad_sum,    r.quad_edge_mass};
}

ordered_json verdict_object(const CriterionVerdict& v) {
  ordered_json j;
  j["id"] = std::string(to_string(v.id));
  j["lhs"] = v.lhs;
  j["bound"] = v.bound;
  j["margin"] = v.margin;
  j["violated"] = v.violated;
  if (v.advisory) j["advisory"] = *v.advisory;
  return j;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::span<const std::string_view> report_fields() noexcept { return kReportFields; }

std::string report_csv_header() {
  std::string s;
  for (std::size_t i = 0; i < kReportFields.size(); ++i) {
    if (i) s += ',';
    s += kReportFields[i];
  }
  return s;
}

std::string report_csv_row(const ObservableReport& report) {
  std::string s;
  for (double x : report_numbers(report)) {
    s += format_double(x);
    s += ',';
  }
  s += report.quad_truncation_warning ? "true" : "false";
  return s;
}

std::string report_json(const ObservableReport& report, int indent) {
  ordered_json j;
  const auto nums = report_numbers(report);
  for (std::size_t i = 0; i < nums.size(); ++i) j[std::string(kReportFields[i])] = nums[i];
  j[std::string(kReportFields.back())] = report.quad_truncation_warning;
  return j.dump(indent);
}

std::string verdict_json(const CriterionVerdict& verdict, int indent) {
  return verdict_object(verdict).dump(indent);
}

std::string verdicts_json(std::span<const CriterionVerdict> verdicts, int indent) {
  auto arr = ordered_json::array();
  for (const auto& v : verdicts) arr.push_back(verdict_object(v));
  return arr.dump(indent);
}

std::string verdicts_csv(std::span<const CriterionVerdict> verdicts) {
  std::string s = "id,lhs,bound,margin,violated,advisory\n";
  for (const auto& v : verdicts) {
    s += to_string(v.id);
    s += ',' + format_double(v.lhs) + ',' + format_double(v.bound) + ',' + format_double(v.margin);
    s += v.violated ? ",true," : ",false,";
    if (v.advisory) s += *v.advisory ? "true" : "false";
    s += '\n';
  }
  return s;
}

std::string verdict_summary(const CriterionVerdict& verdict) {
  std::array<char, 160> buf{};
  const char* state = verdict.violated ? "VIOLATED" : "satisfied";
  const bool advisory = verdict.advisory.value_or(false);
  std::snprintf(buf.data(), buf.size(), "%-16s %-10s lhs=%.10g bound=%.10g margin=%.10g%s",
                std::string(to_string(verdict.id)).c_str(), state, verdict.lhs, verdict.bound,
                verdict.margin, advisory ? " (advisory)" : "");
  return buf.data();
}

void write_density_csv(std::ostream& out, const PhaseDensity& density) {
  out << "phi,p\n";
  for (int k = 0; k < density.size(); ++k) {
    out << format_double(density.phi(k)) << ',' << format_double(density.values()[static_cast<std::size_t>(k)])
        << '\n';
  }
}

void write_samples_csv(std::ostream& out, const LocalPhaseSamples& samples) {
  out << "shot_index,phi1,phi2\n";
  const auto n = samples.phi1.shots();
  for (std::size_t i = 0; i < n; ++i) {
    out << i << ',' << format_double(samples.phi1.phis[i]) << ',' << format_double(samples.phi2.phis[i])
        << '\n';
  }
}

void write_curve_csv(std::ostream& out, const BoundaryCurve& curve) {
  out << "d2,threshold\n";
  for (std::size_t i = 0; i < curve.d2.size(); ++i) {
    out << format_double(curve.d2[i]) << ',' << format_double(curve.values[i]) << '\n';
  }
}

}  // namespace numphase
