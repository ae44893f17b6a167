#include "numphase/phase_povm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "numphase/counter_rng.hpp"
#include "numphase/errors.hpp"

namespace numphase {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kClipTol = 1e-14;

// e^{-2 pi i j / K}, j = 0..K-1
std::vector<Complex> twiddles(int k_size) {
  std::vector<Complex> w(static_cast<std::size_t>(k_size));
  for (int j = 0; j < k_size; ++j) w[static_cast<std::size_t>(j)] = std::polar(1.0, -kTwoPi * j / k_size);
  return w;
}

void check_grid(int grid_size, int degree, bool require_min64) {
  if (grid_size <= 0 || grid_size % 2 != 0) {
    throw DomainError("phase grid size must be positive and even, got " + std::to_string(grid_size));
  }
  if (require_min64 && grid_size < 64) {
    throw DomainError("phase grid size must be at least 64, got " + std::to_string(grid_size));
  }
  const int need = nyquist_minimum(degree);
  if (grid_size < need) {
    throw GridError("phase grid of " + std::to_string(grid_size) +
                        " points is below the Nyquist bound; need at least " + std::to_string(need),
                    need);
  }
}

// Accumulates R_d += w * sum_m c_{m+d} conj(c_m) for one anti-diagonal.
void accumulate_autocorrelation(std::span<const Complex> c, double w, std::vector<Complex>& r) {
  const std::size_t len = c.size();
  for (std::size_t d = 0; d < len && d < r.size(); ++d) {
    Complex s;
    for (std::size_t m = 0; m + d < len; ++m) s += c[m + d] * std::conj(c[m]);
    r[d] += w * s;
  }
}

// p(phi_k) = (1/2pi) [R_0 + 2 Re sum_{d>=1} R_d e^{-i d phi_k}], phi_k = -pi + 2 pi k/K.
std::vector<double> evaluate_density(std::span<const Complex> r, int k_size,
                                     std::span<const Complex> tw) {
  std::vector<double> p(static_cast<std::size_t>(k_size));
  for (int k = 0; k < k_size; ++k) {
    double acc = r[0].real();
    for (std::size_t d = 1; d < r.size(); ++d) {
      const auto idx = (d * static_cast<std::size_t>(k)) % static_cast<std::size_t>(k_size);
      // e^{-i d (-pi)} = (-1)^d
      const double sign = (d % 2 == 0) ? 1.0 : -1.0;
      acc += 2.0 * sign * (r[d] * tw[idx]).real();
    }
    p[static_cast<std::size_t>(k)] = acc / kTwoPi;
  }
  return p;
}

std::vector<Complex> sector_coefficients(const SectorState& s) {
  std::vector<Complex> r(s.amplitudes().size());
  accumulate_autocorrelation(s.amplitudes(), 1.0, r);
  return r;
}

std::vector<double> clipped(std::vector<double> v) {
  for (auto& x : v) {
    if (x < 0.0) {
      if (x < -kClipTol) {
        throw DomainError("phase density value " + std::to_string(x) + " is negative");
      }
      x = 0.0;
    }
  }
  return v;
}

void cumulate(std::span<double> v) {
  double acc = 0.0;
  for (auto& x : v) {
    acc += x;
    x = acc;
  }
}

// Index of the bucket containing u * total in a cumulative array.
std::size_t pick(std::span<const double> cdf, double u) {
  const double target = u * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// PhaseDensity

PhaseDensity::PhaseDensity(std::vector<double> values) : values_(clipped(std::move(values))) {
  if (values_.empty()) throw DomainError("phase density needs at least one grid point");
}

double PhaseDensity::step() const noexcept { return kTwoPi / static_cast<double>(values_.size()); }

double PhaseDensity::phi(int k) const noexcept { return -kPi + step() * k; }

double PhaseDensity::integral() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * step();
}

Complex PhaseDensity::trig_moment(int n) const noexcept {
  Complex s;
  for (int k = 0; k < size(); ++k) s += values_[static_cast<std::size_t>(k)] * std::polar(1.0, n * phi(k));
  return s * step();
}

JointPhaseDensity::JointPhaseDensity(int grid_size, std::vector<double> values)
    : grid_(grid_size), values_(clipped(std::move(values))) {
  if (grid_size <= 0 ||
      values_.size() != static_cast<std::size_t>(grid_size) * static_cast<std::size_t>(grid_size)) {
    throw DomainError("joint phase density must be K x K");
  }
}

double JointPhaseDensity::step() const noexcept { return kTwoPi / grid_; }

double JointPhaseDensity::integral() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * step() * step();
}

PhaseDensity JointPhaseDensity::relative_marginal() const {
  std::vector<double> p(static_cast<std::size_t>(grid_), 0.0);
  const int half = grid_ / 2;
  for (int j = 0; j < grid_; ++j) {
    double s = 0.0;
    for (int k2 = 0; k2 < grid_; ++k2) {
      const int k1 = ((k2 + j - half) % grid_ + grid_) % grid_;
      s += at(k1, k2);
    }
    p[static_cast<std::size_t>(j)] = s * step();
  }
  return PhaseDensity(std::move(p));
}

int default_grid_size(int cutoff) noexcept {
  const auto want = static_cast<unsigned>(4 * (cutoff + 1));
  return std::max(64, static_cast<int>(std::bit_ceil(want)));
}

// ---------------------------------------------------------------------------
// Relative-phase density

std::vector<Complex> relative_phase_coefficients(const PureTwoModeState& state) {
  const int cutoff = state.cutoff();
  std::vector<Complex> r(static_cast<std::size_t>(cutoff) + 1);
  std::vector<Complex> diag;
  for (int n_tot = 0; n_tot <= 2 * cutoff; ++n_tot) {
    const int lo = std::max(0, n_tot - cutoff);
    const int hi = std::min(n_tot, cutoff);
    diag.clear();
    for (int m = lo; m <= hi; ++m) diag.push_back(state(m, n_tot - m));
    accumulate_autocorrelation(diag, 1.0, r);
  }
  return r;
}

std::vector<Complex> relative_phase_coefficients(const SectorMixture& mixture) {
  std::vector<Complex> r(static_cast<std::size_t>(mixture.max_total_number()) + 1);
  for (const auto& sec : mixture.sectors()) accumulate_autocorrelation(sec.state.amplitudes(), sec.weight, r);
  return r;
}

PhaseDensity relative_phase_density(const PureTwoModeState& state, int grid_size) {
  check_grid(grid_size, phase_degree(state), true);
  const auto r = relative_phase_coefficients(state);
  return PhaseDensity(evaluate_density(r, grid_size, twiddles(grid_size)));
}

PhaseDensity relative_phase_density(const SectorMixture& mixture, int grid_size) {
  check_grid(grid_size, phase_degree(mixture), true);
  const auto r = relative_phase_coefficients(mixture);
  return PhaseDensity(evaluate_density(r, grid_size, twiddles(grid_size)));
}

JointPhaseDensity joint_local_phase_density(const PureTwoModeState& state, int grid_size) {
  check_grid(grid_size, phase_degree(state), true);
  const int d = state.dim();
  const auto k_size = static_cast<std::size_t>(grid_size);
  const auto tw = twiddles(grid_size);
  // e^{-i m phi_k} = (-1)^m e^{-2 pi i m k / K}
  auto phase = [&](int m, std::size_t k) {
    const Complex w = tw[(static_cast<std::size_t>(m) * k) % k_size];
    return (m % 2 == 0) ? w : -w;
  };

  std::vector<double> p(k_size * k_size);
  std::vector<Complex> v(static_cast<std::size_t>(d));
  const double norm = 1.0 / (kTwoPi * kTwoPi);
  for (std::size_t k1 = 0; k1 < k_size; ++k1) {
    for (int n = 0; n < d; ++n) {
      Complex s;
      for (int m = 0; m < d; ++m) s += state(m, n) * phase(m, k1);
      v[static_cast<std::size_t>(n)] = s;
    }
    for (std::size_t k2 = 0; k2 < k_size; ++k2) {
      Complex s;
      for (int n = 0; n < d; ++n) s += v[static_cast<std::size_t>(n)] * phase(n, k2);
      p[k1 * k_size + k2] = std::norm(s) * norm;
    }
  }
  return JointPhaseDensity(grid_size, std::move(p));
}

// ---------------------------------------------------------------------------
// Circular and linear statistics

double circular_mean(const PhaseDensity& density) noexcept { return std::arg(density.trig_moment(1)); }

double linear_phase_variance(const PhaseDensity& density) {
  const int k_size = density.size();
  const int k_max = k_size / 2 - 1;
  const auto tw = twiddles(k_size);
  const auto vals = density.values();

  // a_k = ∫ p(phi) e^{-i k phi} dphi from the grid samples.
  std::vector<Complex> a(static_cast<std::size_t>(std::max(k_max, 0)) + 1);
  for (int k = 0; k <= k_max; ++k) {
    Complex s;
    for (int j = 0; j < k_size; ++j) {
      s += vals[static_cast<std::size_t>(j)] *
           tw[(static_cast<std::size_t>(k) * static_cast<std::size_t>(j)) % static_cast<std::size_t>(k_size)];
    }
    a[static_cast<std::size_t>(k)] = ((k % 2 == 0) ? s : -s) * density.step();
  }
  const double total = a[0].real();
  if (!(total > 0.0)) throw DomainError("phase density has zero mass");

  // Shift by the circular mean mu: coefficients of p(phi + mu) are a_k e^{i k mu}.
  const double mu = k_max >= 1 ? std::arg(std::conj(a[1])) : 0.0;
  double first = 0.0;
  double second = kPi * kPi / 3.0 * total;
  for (int k = 1; k <= k_max; ++k) {
    const Complex b = a[static_cast<std::size_t>(k)] * std::polar(1.0, k * mu);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    // phi = sum 2(-1)^{k+1} sin(k phi)/k ;  phi^2 = pi^2/3 + sum 4(-1)^k cos(k phi)/k^2
    first += -2.0 * sign * (-b.imag()) / k;
    second += 4.0 * sign * b.real() / (static_cast<double>(k) * k);
  }
  first /= total;
  second /= total;
  return std::max(0.0, second - first * first);
}

// ---------------------------------------------------------------------------
// Sampling

LocalPhaseSampler::LocalPhaseSampler(const PureTwoModeState& state, int grid_size)
    : grid_(grid_size == 0 ? default_grid_size(phase_degree(state)) : grid_size) {
  const auto joint = joint_local_phase_density(state, grid_);
  const auto k_size = static_cast<std::size_t>(grid_);
  cdf1_.assign(k_size, 0.0);
  cdf2_.assign(joint.values().begin(), joint.values().end());
  for (std::size_t k1 = 0; k1 < k_size; ++k1) {
    std::span<double> row(cdf2_.data() + k1 * k_size, k_size);
    cumulate(row);
    cdf1_[k1] = row.back();
  }
  cumulate(cdf1_);
}

LocalPhaseSampler::LocalPhaseSampler(const SectorMixture& mixture, int grid_size)
    : grid_(grid_size == 0 ? default_grid_size(phase_degree(mixture)) : grid_size), sectored_(true) {
  check_grid(grid_, phase_degree(mixture), true);
  const auto tw = twiddles(grid_);
  const auto k_size = static_cast<std::size_t>(grid_);
  const auto sectors = mixture.sectors();
  sector_cdf_.reserve(sectors.size());
  relative_cdf_.reserve(sectors.size() * k_size);
  for (const auto& sec : sectors) {
    sector_cdf_.push_back(sec.weight);
    auto p = clipped(evaluate_density(sector_coefficients(sec.state), grid_, tw));
    cumulate(p);
    relative_cdf_.insert(relative_cdf_.end(), p.begin(), p.end());
  }
  cumulate(sector_cdf_);
}

double LocalPhaseSampler::grid_phi(int k) const noexcept { return -kPi + kTwoPi * k / grid_; }

std::pair<double, double> LocalPhaseSampler::draw(std::uint64_t seed, std::uint64_t shot) const {
  const CounterRng rng(seed);
  const auto k_size = static_cast<std::size_t>(grid_);
  if (!sectored_) {
    const std::size_t k1 = pick(cdf1_, rng.uniform(0, shot));
    const std::size_t k2 = pick(std::span<const double>(cdf2_.data() + k1 * k_size, k_size),
                                rng.uniform(1, shot));
    return {grid_phi(static_cast<int>(k1)), grid_phi(static_cast<int>(k2))};
  }
  const std::size_t s = pick(sector_cdf_, rng.uniform(0, shot));
  const auto k2 = std::min(static_cast<std::size_t>(rng.uniform(1, shot) * grid_), k_size - 1);
  const std::size_t j =
      pick(std::span<const double>(relative_cdf_.data() + s * k_size, k_size), rng.uniform(2, shot));
  const int k1 = ((static_cast<int>(k2) + static_cast<int>(j) - grid_ / 2) % grid_ + grid_) % grid_;
  return {grid_phi(k1), grid_phi(static_cast<int>(k2))};
}

LocalPhaseSamples LocalPhaseSampler::sample(std::size_t shots, std::uint64_t seed,
                                            std::uint64_t first_shot) const {
  LocalPhaseSamples out;
  out.phi1.seed = seed;
  out.phi2.seed = seed;
  out.phi1.phis.resize(shots);
  out.phi2.phis.resize(shots);
  for (std::size_t i = 0; i < shots; ++i) {
    const auto [p1, p2] = draw(seed, first_shot + i);
    out.phi1.phis[i] = p1;
    out.phi2.phis[i] = p2;
  }
  return out;
}

LocalPhaseSamples sample_local_phases(const PureTwoModeState& state, std::size_t shots,
                                      std::uint64_t seed, int grid_size) {
  if (shots < 1) throw DomainError("need at least one shot");
  return LocalPhaseSampler(state, grid_size).sample(shots, seed);
}

LocalPhaseSamples sample_local_phases(const SectorMixture& mixture, std::size_t shots,
                                      std::uint64_t seed, int grid_size) {
  if (shots < 1) throw DomainError("need at least one shot");
  return LocalPhaseSampler(mixture, grid_size).sample(shots, seed);
}

// ---------------------------------------------------------------------------
// Estimator

DispersionEstimate estimate_relative_dispersion(const SampleSet& phi1, const SampleSet& phi2,
                                                const EstimatorOptions& options) {
  if (phi1.shots() != phi2.shots()) {
    throw DomainError("sample sets differ in length: " + std::to_string(phi1.shots()) + " vs " +
                      std::to_string(phi2.shots()));
  }
  const std::size_t n = phi1.shots();
  if (n < 2) throw DomainError("need at least 2 shots to estimate a dispersion error");
  if (options.resamples < 2) throw DomainError("need at least 2 bootstrap resamples");

  std::vector<Complex> z(n);
  Complex sum;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = std::polar(1.0, phi1.phis[i] - phi2.phis[i]);
    sum += z[i];
  }
  DispersionEstimate est;
  est.shots = n;
  est.mean_phasor = sum / static_cast<double>(n);
  est.d2_hat = 1.0 - std::norm(est.mean_phasor);
  est.bias_corrected = est.d2_hat * static_cast<double>(n) / static_cast<double>(n - 1);

  const CounterRng rng(options.seed);
  double acc = 0.0;
  double acc2 = 0.0;
  for (int b = 0; b < options.resamples; ++b) {
    Complex s;
    const auto stream = static_cast<std::uint64_t>(b) + 1;
    for (std::size_t i = 0; i < n; ++i) s += z[rng.bits(stream, i) % n];
    const double d2 = 1.0 - std::norm(s / static_cast<double>(n));
    acc += d2;
    acc2 += d2 * d2;
  }
  const double r = options.resamples;
  const double mean = acc / r;
  est.std_error = std::sqrt(std::max(0.0, (acc2 - r * mean * mean) / (r - 1.0)));
  return est;
}

}  // namespace numphase
