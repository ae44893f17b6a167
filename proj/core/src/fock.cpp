#include "numphase/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "numphase/errors.hpp"

namespace numphase {

namespace {

double squared_norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return s;
}

void check_total_number(int total_number) {
  if (total_number < 0) {
    throw DomainError("total number must be non-negative, got " + std::to_string(total_number));
  }
}

// Row of sqrt(C(N,m) t^m (1-t)^(N-m)), m = 0..N.
std::vector<double> binomial_amplitudes(int n, double t) {
  std::vector<double> amp(static_cast<std::size_t>(n) + 1, 0.0);
  if (t == 0.0) {
    amp[0] = 1.0;
    return amp;
  }
  if (t == 1.0) {
    amp[static_cast<std::size_t>(n)] = 1.0;
    return amp;
  }
  const double log_t = std::log(t);
  const double log_s = std::log1p(-t);
  if (n <= 1000) {
    // Direct products keep the balanced case exact to a few ulps.
    double binom = 1.0;
    for (int m = 0; m <= n; ++m) {
      const double weight = binom * std::pow(t, m) * std::pow(1.0 - t, n - m);
      amp[static_cast<std::size_t>(m)] = std::sqrt(weight);
      binom = binom * static_cast<double>(n - m) / static_cast<double>(m + 1);
    }
    return amp;
  }
  const double lg_n = std::lgamma(n + 1.0);
  for (int m = 0; m <= n; ++m) {
    const double log_w = lg_n - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0) + m * log_t +
                         (n - m) * log_s;
    amp[static_cast<std::size_t>(m)] = std::exp(0.5 * log_w);
  }
  return amp;
}

double moment_mean(int first, std::span<const double> p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * (first + static_cast<double>(i));
  return s;
}

double moment_variance(int first, std::span<const double> p, double mean) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = first + static_cast<double>(i) - mean;
    s += p[i] * d * d;
  }
  return s;
}

void check_tail_tol(double tail_tol) {
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
    throw DomainError("tail tolerance must lie in (0,1), got " + std::to_string(tail_tol));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// PureTwoModeState

PureTwoModeState PureTwoModeState::from_coefficients(int cutoff, std::vector<Complex> coeffs) {
  if (cutoff < 0) throw DomainError("cutoff must be non-negative");
  const auto d = static_cast<std::size_t>(cutoff) + 1;
  if (coeffs.size() != d * d) {
    throw DomainError("coefficient grid has " + std::to_string(coeffs.size()) +
                      " entries, expected " + std::to_string(d * d));
  }
  const double mass = squared_norm(coeffs);
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("state has zero or non-finite norm");
  const double scale = 1.0 / std::sqrt(mass);
  for (auto& c : coeffs) c *= scale;
  return PureTwoModeState(cutoff, std::move(coeffs), mass);
}

PureTwoModeState PureTwoModeState::vacuum(int cutoff) {
  if (cutoff < 0) throw DomainError("cutoff must be non-negative");
  const auto d = static_cast<std::size_t>(cutoff) + 1;
  std::vector<Complex> c(d * d);
  c[0] = 1.0;
  return PureTwoModeState(cutoff, std::move(c), 1.0);
}

double PureTwoModeState::edge_mass() const noexcept {
  double s = 0.0;
  for (int m = 0; m <= cutoff_; ++m) {
    for (int n = 0; n <= cutoff_; ++n) {
      if (m == cutoff_ || n == cutoff_) s += std::norm((*this)(m, n));
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// SectorState

SectorState::SectorState(int total_number, std::vector<Complex> amplitudes)
    : total_number_(total_number), amplitudes_(std::move(amplitudes)) {
  check_total_number(total_number);
  if (amplitudes_.size() != static_cast<std::size_t>(total_number) + 1) {
    throw DomainError("sector N=" + std::to_string(total_number) + " needs " +
                      std::to_string(total_number + 1) + " amplitudes, got " +
                      std::to_string(amplitudes_.size()));
  }
  const double mass = squared_norm(amplitudes_);
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("sector state has zero norm");
  const double scale = 1.0 / std::sqrt(mass);
  for (auto& c : amplitudes_) c *= scale;
}

SectorState SectorState::from_pure(const PureTwoModeState& state, int total_number) {
  check_total_number(total_number);
  const int cutoff = state.cutoff();
  double leak = 0.0;
  for (int m = 0; m <= cutoff; ++m) {
    for (int n = 0; n <= cutoff; ++n) {
      if (m + n != total_number) leak += std::norm(state(m, n));
    }
  }
  if (leak >= kSectorLeakTol) {
    throw SectorError("sector builder for N=" + std::to_string(total_number) +
                          " returned a state with off-sector mass " + std::to_string(leak),
                      total_number);
  }
  std::vector<Complex> amp(static_cast<std::size_t>(total_number) + 1);
  bool any = false;
  for (int m = 0; m <= total_number; ++m) {
    const int n = total_number - m;
    if (m <= cutoff && n <= cutoff) {
      amp[static_cast<std::size_t>(m)] = state(m, n);
      any = true;
    }
  }
  if (!any) {
    throw SectorError("state of cutoff " + std::to_string(cutoff) +
                          " cannot represent total number " + std::to_string(total_number),
                      total_number);
  }
  return SectorState(total_number, std::move(amp));
}

PureTwoModeState SectorState::to_pure() const {
  const int n_tot = total_number_;
  const auto d = static_cast<std::size_t>(n_tot) + 1;
  std::vector<Complex> c(d * d);
  for (int m = 0; m <= n_tot; ++m) {
    c[static_cast<std::size_t>(m) * d + static_cast<std::size_t>(n_tot - m)] =
        amplitudes_[static_cast<std::size_t>(m)];
  }
  return PureTwoModeState::from_coefficients(n_tot, std::move(c));
}

// ---------------------------------------------------------------------------
// Fixed-N families

SectorState number_phase_sector(int total_number, double phi) {
  check_total_number(total_number);
  const double norm = 1.0 / std::sqrt(total_number + 1.0);
  std::vector<Complex> amp(static_cast<std::size_t>(total_number) + 1);
  for (int m = 0; m <= total_number; ++m) amp[static_cast<std::size_t>(m)] = std::polar(norm, m * phi);
  return SectorState(total_number, std::move(amp));
}

PureTwoModeState number_phase_state(int total_number, double phi) {
  return number_phase_sector(total_number, phi).to_pure();
}

SectorState split_fock_sector(int total_number, double phi, double transmissivity) {
  check_total_number(total_number);
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw DomainError("transmissivity must lie in [0,1], got " + std::to_string(transmissivity));
  }
  const auto mag = binomial_amplitudes(total_number, transmissivity);
  std::vector<Complex> amp(mag.size());
  for (std::size_t m = 0; m < mag.size(); ++m) {
    amp[m] = std::polar(mag[m], static_cast<double>(m) * phi);
  }
  return SectorState(total_number, std::move(amp));
}

PureTwoModeState split_fock_state(int total_number, double phi, double transmissivity) {
  return split_fock_sector(total_number, phi, transmissivity).to_pure();
}

// ---------------------------------------------------------------------------
// Two-mode squeezed vacuum

double tmss_tail_mass(double r, int cutoff) {
  const double t = std::tanh(r);
  return std::pow(t * t, cutoff + 1);
}

int select_cutoff(double r, double tail_tol) {
  if (!(r >= 0.0)) throw DomainError("squeezing r must be non-negative");
  check_tail_tol(tail_tol);
  const double t = std::tanh(r);
  if (t == 0.0) return 0;
  // tail(M) = t^{2(M+1)} < tol  <=>  M + 1 > log(tol) / (2 log t)
  const double bound = std::log(tail_tol) / (2.0 * std::log(t));
  int m = std::max(0, static_cast<int>(std::ceil(bound)) - 1);
  while (m > 0 && tmss_tail_mass(r, m - 1) < tail_tol) --m;
  while (tmss_tail_mass(r, m) >= tail_tol) ++m;
  return m;
}

PureTwoModeState two_mode_squeezed_state(double r, int cutoff, double tail_tol) {
  if (cutoff < 0) throw DomainError("cutoff must be non-negative");
  const int required = select_cutoff(r, tail_tol);
  if (cutoff < required) {
    throw TruncationError("cutoff " + std::to_string(cutoff) + " leaves squeezed-vacuum tail mass " +
                              std::to_string(tmss_tail_mass(r, cutoff)) +
                              "; tail tolerance needs cutoff >= " + std::to_string(required),
                          required);
  }
  const double t = std::tanh(r);
  const double c0 = 1.0 / std::cosh(r);
  const auto d = static_cast<std::size_t>(cutoff) + 1;
  std::vector<Complex> c(d * d);
  double amp = c0;
  for (std::size_t m = 0; m < d; ++m) {
    c[m * d + m] = amp;
    amp *= t;
  }
  return PureTwoModeState::from_coefficients(cutoff, std::move(c));
}

PureTwoModeState auto_two_mode_squeezed_state(double r, double tail_tol) {
  return two_mode_squeezed_state(r, select_cutoff(r, tail_tol), tail_tol);
}

PureTwoModeState product_state(std::span<const Complex> mode1, std::span<const Complex> mode2) {
  if (mode1.empty() || mode2.empty()) throw DomainError("product factors must be non-empty");
  const double n1 = squared_norm(mode1);
  const double n2 = squared_norm(mode2);
  if (!(n1 > 0.0) || !(n2 > 0.0)) throw DomainError("product factor has zero norm");
  const auto d = std::max(mode1.size(), mode2.size());
  std::vector<Complex> c(d * d);
  for (std::size_t m = 0; m < mode1.size(); ++m) {
    for (std::size_t n = 0; n < mode2.size(); ++n) c[m * d + n] = mode1[m] * mode2[n];
  }
  return PureTwoModeState::from_coefficients(static_cast<int>(d) - 1, std::move(c));
}

// ---------------------------------------------------------------------------
// Number distributions

NumberDistribution NumberDistribution::from_masses(int first, std::vector<double> masses) {
  if (first < 0) throw DomainError("distribution support must start at N >= 0");
  if (masses.empty()) throw DomainError("distribution has no support");
  double total = 0.0;
  for (double p : masses) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("probability masses must be finite and >= 0");
    total += p;
  }
  if (!(total > 0.0)) throw DomainError("distribution has zero total mass");
  for (auto& p : masses) p /= total;

  NumberDistribution d;
  d.first_ = first;
  d.masses_ = std::move(masses);
  d.retained_mass_ = 1.0;
  d.mean_ = moment_mean(first, d.masses_);
  d.variance_ = moment_variance(first, d.masses_, d.mean_);
  return d;
}

NumberDistribution NumberDistribution::point_mass(int total_number) {
  check_total_number(total_number);
  return from_masses(total_number, {1.0});
}

double NumberDistribution::probability(int total_number) const noexcept {
  if (total_number < first_ || total_number > last()) return 0.0;
  return masses_[static_cast<std::size_t>(total_number - first_)];
}

NumberDistribution poissonian_distribution(double mean, double tail_tol) {
  if (!(mean > 0.0) || !std::isfinite(mean)) throw DomainError("Poissonian mean must be > 0");
  check_tail_tol(tail_tol);
  const int mode = static_cast<int>(std::floor(mean));
  const double p_mode = std::exp(mode * std::log(mean) - mean - std::lgamma(mode + 1.0));
  const double half_tol = 0.5 * tail_tol;

  // Descend with p(N-1) = p(N) N / mean. Below N the remaining lower tail is
  // bounded by p(N-1) / (1 - (N-1)/mean).
  std::vector<double> lower;
  int lo = mode;
  double p = p_mode;
  while (lo > 0) {
    const double next = p * (static_cast<double>(lo) / mean);
    const double ratio = (lo - 1.0) / mean;
    if (ratio < 1.0 && next / (1.0 - ratio) < half_tol) break;
    lower.push_back(next);
    p = next;
    --lo;
  }
  // Ascend with p(N+1) = p(N) mean / (N+1); beyond M the tail is bounded by
  // p(M+1) / (1 - mean/(M+2)).
  std::vector<double> upper{p_mode};
  int hi = mode;
  p = p_mode;
  for (;;) {
    const double next = p * (mean / static_cast<double>(hi + 1));
    const double ratio = mean / (hi + 2.0);
    if (ratio < 1.0 && next / (1.0 - ratio) < half_tol) break;
    upper.push_back(next);
    p = next;
    ++hi;
  }
  std::vector<double> masses(lower.rbegin(), lower.rend());
  masses.insert(masses.end(), upper.begin(), upper.end());
  const double kept = std::accumulate(masses.begin(), masses.end(), 0.0);

  auto d = NumberDistribution::from_masses(lo, std::move(masses));
  d.retained_mass_ = kept;
  return d;
}

NumberDistribution gaussian_distribution(double mean, double std_dev, double tail_tol) {
  if (!(mean > 0.0) || !std::isfinite(mean)) throw DomainError("Gaussian mean must be > 0");
  if (!(std_dev > 0.0) || !std::isfinite(std_dev)) throw DomainError("Gaussian std must be > 0");
  check_tail_tol(tail_tol);

  const double inv_two_var = 1.0 / (2.0 * std_dev * std_dev);
  auto kernel = [&](int n) {
    const double x = n - mean;
    return std::exp(-x * x * inv_two_var);
  };
  // Each side beyond mean +- (W - 1) carries at most erfc(sqrt(ln 1/tol))/2 < tol/2
  // of the continuous mass.
  const double half_width = std_dev * std::sqrt(2.0 * std::log(1.0 / tail_tol)) + 1.0;
  const int lo = std::max(0, static_cast<int>(std::floor(mean - half_width)));
  const int hi = std::max(lo, static_cast<int>(std::ceil(mean + half_width)));

  std::vector<double> masses;
  masses.reserve(static_cast<std::size_t>(hi - lo) + 1);
  for (int n = lo; n <= hi; ++n) masses.push_back(kernel(n));
  const double kept = std::accumulate(masses.begin(), masses.end(), 0.0);

  // Reference normalizer over a much wider window.
  const double wide = half_width + 10.0 * std_dev + 10.0;
  const int wlo = std::max(0, static_cast<int>(std::floor(mean - wide)));
  const int whi = static_cast<int>(std::ceil(mean + wide));
  double total = 0.0;
  for (int n = wlo; n <= whi; ++n) total += kernel(n);

  if (!(kept > 0.0)) throw DomainError("Gaussian kernel vanishes on N >= 0");
  auto d = NumberDistribution::from_masses(lo, std::move(masses));
  d.retained_mass_ = kept / total;
  d.regime_ok_ = std_dev <= 0.1 * mean;
  return d;
}

NumberDistribution thermal_distribution(double mean, double tail_tol) {
  if (!(mean > 0.0) || !std::isfinite(mean)) throw DomainError("thermal mean must be > 0");
  check_tail_tol(tail_tol);
  const double q = mean / (mean + 1.0);
  // Tail beyond M is exactly q^{M+1}.
  int last = 0;
  while (std::pow(q, last + 1) >= tail_tol) ++last;

  std::vector<double> masses(static_cast<std::size_t>(last) + 1);
  double p = 1.0 / (mean + 1.0);
  for (auto& m : masses) {
    m = p;
    p *= q;
  }
  auto d = NumberDistribution::from_masses(0, std::move(masses));
  d.retained_mass_ = 1.0 - std::pow(q, last + 1);
  return d;
}

// ---------------------------------------------------------------------------
// Sector mixtures

SectorMixture::SectorMixture(NumberDistribution distribution, std::vector<Sector> sectors)
    : distribution_(std::move(distribution)), sectors_(std::move(sectors)) {
  double total = 0.0;
  for (const auto& s : sectors_) {
    if (!(s.weight >= 0.0)) throw DomainError("sector weights must be non-negative");
    total += s.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("sector weights sum to " + std::to_string(total) + ", expected 1");
  }
}

int SectorMixture::max_total_number() const noexcept {
  int m = 0;
  for (const auto& s : sectors_) m = std::max(m, s.total_number());
  return m;
}

SectorMixture mixture_over_sector_states(const NumberDistribution& distribution,
                                         const SectorBuilder& builder) {
  std::vector<Sector> sectors;
  const auto masses = distribution.masses();
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (masses[i] <= 0.0) continue;
    const int n = distribution.first() + static_cast<int>(i);
    SectorState state = builder(n);
    if (state.total_number() != n) {
      throw SectorError("sector builder for N=" + std::to_string(n) + " returned total number " +
                            std::to_string(state.total_number()),
                        n);
    }
    sectors.push_back(Sector{masses[i], std::move(state)});
  }
  return SectorMixture(distribution, std::move(sectors));
}

SectorMixture mixture_over_sectors(const NumberDistribution& distribution,
                                   const PureSectorBuilder& builder) {
  return mixture_over_sector_states(
      distribution, [&](int n) { return SectorState::from_pure(builder(n), n); });
}

}  // namespace numphase
