#include "numphase/observables.hpp"

#include <algorithm>
#include <cmath>

namespace numphase {

namespace {

struct ModeStats {
  double mean = 0.0;
  double var = 0.0;
};

// Moments of |m,n>-diagonal quantities for a pure state, two-pass.
template <typename F>
ModeStats diagonal_stats(const PureTwoModeState& s, F value) {
  const int d = s.dim();
  ModeStats st;
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) st.mean += std::norm(s(m, n)) * value(m, n);
  }
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      const double x = value(m, n) - st.mean;
      st.var += std::norm(s(m, n)) * x * x;
    }
  }
  return st;
}

template <typename F>
ModeStats sector_stats(const SectorState& s, F value) {
  const auto amp = s.amplitudes();
  const int n_tot = s.total_number();
  ModeStats st;
  for (int m = 0; m <= n_tot; ++m) st.mean += std::norm(amp[static_cast<std::size_t>(m)]) * value(m, n_tot - m);
  for (int m = 0; m <= n_tot; ++m) {
    const double x = value(m, n_tot - m) - st.mean;
    st.var += std::norm(amp[static_cast<std::size_t>(m)]) * x * x;
  }
  return st;
}

// Law of total variance over weighted components.
struct TotalVariance {
  double w_mean = 0.0;
  double w_second = 0.0;  // sum w (var_k + mean_k^2)

  void add(double w, const ModeStats& s) {
    w_mean += w * s.mean;
    w_second += w * (s.var + s.mean * s.mean);
  }
  ModeStats result() const { return {w_mean, std::max(0.0, w_second - w_mean * w_mean)}; }
};

// For mixtures the variance is computed around the overall mean to avoid the
// cancellation in E[x^2] - E[x]^2 at large N.
template <typename F>
ModeStats mixture_stats(const SectorMixture& mix, F value) {
  TotalVariance pass1;
  std::vector<ModeStats> per;
  per.reserve(mix.sectors().size());
  for (const auto& sec : mix.sectors()) {
    per.push_back(sector_stats(sec.state, value));
    pass1.add(sec.weight, per.back());
  }
  const double mean = pass1.w_mean;
  double var = 0.0;
  std::size_t i = 0;
  for (const auto& sec : mix.sectors()) {
    const double dm = per[i].mean - mean;
    var += sec.weight * (per[i].var + dm * dm);
    ++i;
  }
  return {mean, var};
}

Complex sector_exp_phase(const SectorState& s) {
  const auto c = s.amplitudes();
  Complex sum;
  for (std::size_t m = 0; m + 1 < c.size(); ++m) sum += std::conj(c[m]) * c[m + 1];
  return sum;
}

HzMoments sector_hz(const SectorState& s) {
  const auto c = s.amplitudes();
  const int n_tot = s.total_number();
  HzMoments h;
  for (int m = 0; m <= n_tot; ++m) {
    const double p = std::norm(c[static_cast<std::size_t>(m)]);
    const int n = n_tot - m;
    h.na += m * p;
    h.nb += n * p;
    h.nanb += static_cast<double>(m) * n * p;
    if (m < n_tot) {
      // a†b |m, n> = sqrt((m+1) n) |m+1, n-1>
      h.adagb += std::sqrt((m + 1.0) * n) * std::conj(c[static_cast<std::size_t>(m) + 1]) *
                 c[static_cast<std::size_t>(m)];
    }
  }
  return h;
}

}  // namespace

double dispersion_from_moment(Complex e) noexcept {
  return std::clamp(1.0 - std::norm(e), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Number moments

NumberMoments number_moments(const PureTwoModeState& state) {
  const auto tot = diagonal_stats(state, [](int m, int n) { return static_cast<double>(m + n); });
  const auto n1 = diagonal_stats(state, [](int m, int) { return static_cast<double>(m); });
  const auto n2 = diagonal_stats(state, [](int, int n) { return static_cast<double>(n); });
  return {tot.mean, tot.var, n1.var, n2.var};
}

NumberMoments number_moments(const SectorMixture& mixture) {
  const auto tot = mixture_stats(mixture, [](int m, int n) { return static_cast<double>(m + n); });
  const auto n1 = mixture_stats(mixture, [](int m, int) { return static_cast<double>(m); });
  const auto n2 = mixture_stats(mixture, [](int, int n) { return static_cast<double>(n); });
  return {tot.mean, tot.var, n1.var, n2.var};
}

// ---------------------------------------------------------------------------
// Exponential-of-phase moments

Complex exp_phase_relative(const PureTwoModeState& state) {
  const int d = state.dim();
  Complex sum;
  for (int m = 0; m + 1 < d; ++m) {
    for (int n = 0; n + 1 < d; ++n) sum += std::conj(state(m, n + 1)) * state(m + 1, n);
  }
  return sum;
}

Complex exp_phase_relative(const SectorMixture& mixture) {
  Complex sum;
  for (const auto& sec : mixture.sectors()) sum += sec.weight * sector_exp_phase(sec.state);
  return sum;
}

Complex exp_phase_single(const PureTwoModeState& state, Mode mode) {
  const int d = state.dim();
  Complex sum;
  if (mode == Mode::one) {
    for (int m = 0; m + 1 < d; ++m) {
      for (int n = 0; n < d; ++n) sum += std::conj(state(m, n)) * state(m + 1, n);
    }
  } else {
    for (int m = 0; m < d; ++m) {
      for (int n = 0; n + 1 < d; ++n) sum += std::conj(state(m, n)) * state(m, n + 1);
    }
  }
  return sum;
}

Complex exp_phase_single(const SectorMixture&, Mode) { return {}; }

Dispersions dispersions(const PureTwoModeState& state) {
  return {dispersion_from_moment(exp_phase_relative(state)),
          dispersion_from_moment(exp_phase_single(state, Mode::one)),
          dispersion_from_moment(exp_phase_single(state, Mode::two))};
}

Dispersions dispersions(const SectorMixture& mixture) {
  return {dispersion_from_moment(exp_phase_relative(mixture)), 1.0, 1.0};
}

// ---------------------------------------------------------------------------
// Hillery-Zubairy moments

HzMoments hz_moments(const PureTwoModeState& state) {
  const int d = state.dim();
  HzMoments h;
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      const double p = std::norm(state(m, n));
      h.na += m * p;
      h.nb += n * p;
      h.nanb += static_cast<double>(m) * n * p;
      if (m + 1 < d && n + 1 < d) {
        h.adagb += std::sqrt((m + 1.0) * (n + 1.0)) * std::conj(state(m + 1, n)) * state(m, n + 1);
      }
    }
  }
  return h;
}

HzMoments hz_moments(const SectorMixture& mixture) {
  HzMoments h;
  for (const auto& sec : mixture.sectors()) {
    const auto s = sector_hz(sec.state);
    h.adagb += sec.weight * s.adagb;
    h.nanb += sec.weight * s.nanb;
    h.na += sec.weight * s.na;
    h.nb += sec.weight * s.nb;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Quadratures

QuadratureSum quadrature_sum_variance(const PureTwoModeState& state) {
  // (X1-X2)^2 + (P1+P2)^2 = 2 N1 + 2 N2 + 2 - 2 (ab + a†b†)
  const int d = state.dim();
  Complex a, b, ab;
  double na = 0.0, nb = 0.0;
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      const Complex c = state(m, n);
      const double p = std::norm(c);
      na += m * p;
      nb += n * p;
      if (m > 0) a += std::sqrt(static_cast<double>(m)) * std::conj(state(m - 1, n)) * c;
      if (n > 0) b += std::sqrt(static_cast<double>(n)) * std::conj(state(m, n - 1)) * c;
      if (m > 0 && n > 0) {
        ab += std::sqrt(static_cast<double>(m) * n) * std::conj(state(m - 1, n - 1)) * c;
      }
    }
  }
  const double second = 2.0 * na + 2.0 * nb + 2.0 - 4.0 * ab.real();
  const double mean_x = std::sqrt(2.0) * (a - b).real();
  const double mean_p = std::sqrt(2.0) * (a + b).imag();
  QuadratureSum q;
  q.value = second - mean_x * mean_x - mean_p * mean_p;
  q.edge_mass = state.edge_mass();
  q.truncation_warning = q.edge_mass > kEdgeWarningMass;
  return q;
}

QuadratureSum quadrature_sum_variance(const SectorMixture& mixture) {
  double n_mean = 0.0;
  for (const auto& sec : mixture.sectors()) n_mean += sec.weight * sec.total_number();
  return {2.0 * n_mean + 2.0, 0.0, false};
}

// ---------------------------------------------------------------------------
// Reports

namespace {

template <typename State>
ObservableReport build_report(const State& state) {
  ObservableReport r;
  const auto nm = number_moments(state);
  r.n_mean = nm.n_mean;
  r.n_var = nm.n_var;
  r.n1_var = nm.n1_var;
  r.n2_var = nm.n2_var;
  r.e_rel = exp_phase_relative(state);
  r.e1 = exp_phase_single(state, Mode::one);
  r.e2 = exp_phase_single(state, Mode::two);
  r.d2_rel = dispersion_from_moment(r.e_rel);
  r.d2_1 = dispersion_from_moment(r.e1);
  r.d2_2 = dispersion_from_moment(r.e2);
  const auto hz = hz_moments(state);
  r.hz_adagb = hz.adagb;
  r.hz_nanb = hz.nanb;
  r.hz_na = hz.na;
  r.hz_nb = hz.nb;
  const auto q = quadrature_sum_variance(state);
  r.quad_sum = q.value;
  r.quad_edge_mass = q.edge_mass;
  r.quad_truncation_warning = q.truncation_warning;
  return r;
}

}  // namespace

ObservableReport observe(const PureTwoModeState& state) { return build_report(state); }
ObservableReport observe(const SectorMixture& mixture) { return build_report(mixture); }

}  // namespace numphase
