#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "numphase/fock.hpp"

namespace numphase {

/// Phase density sampled at K points phi_k = -pi + 2 pi k / K.
class PhaseDensity {
 public:
  /// Values below -1e-14 are rejected with DomainError; smaller negatives are clipped to 0.
  explicit PhaseDensity(std::vector<double> values);

  int size() const noexcept { return static_cast<int>(values_.size()); }
  double step() const noexcept;
  double phi(int k) const noexcept;
  std::span<const double> values() const noexcept { return values_; }

  /// Trapezoidal integral over one period.
  double integral() const noexcept;

  /// Trapezoidal estimate of ∫ e^{i n phi} p(phi) dphi; exact for band-limited p of degree < K - n.
  Complex trig_moment(int n) const noexcept;

 private:
  std::vector<double> values_;
};

/// Joint density of the two local phases on a K x K grid, row index k1 for phi_1.
class JointPhaseDensity {
 public:
  explicit JointPhaseDensity(int grid_size, std::vector<double> values);

  int size() const noexcept { return grid_; }
  double step() const noexcept;
  double at(int k1, int k2) const noexcept {
    return values_[static_cast<std::size_t>(k1) * static_cast<std::size_t>(grid_) +
                   static_cast<std::size_t>(k2)];
  }
  std::span<const double> values() const noexcept { return values_; }

  double integral() const noexcept;

  /// p(phi) = ∫ dvarphi p(phi1 = phi + varphi, phi2 = varphi), on the same grid.
  PhaseDensity relative_marginal() const;

 private:
  int grid_;
  std::vector<double> values_;
};

/// Smallest grid integrating a degree-`cutoff` trigonometric polynomial exactly.
constexpr int nyquist_minimum(int cutoff) noexcept { return 2 * (cutoff + 1); }

/// 4(cutoff+1) rounded up to a power of two, at least 64.
int default_grid_size(int cutoff) noexcept;

/// Largest Fourier degree of the phase densities of a state.
inline int phase_degree(const PureTwoModeState& s) noexcept { return s.cutoff(); }
inline int phase_degree(const SectorMixture& s) noexcept { return s.max_total_number(); }

/// Coefficients R_d, d = 0..degree, of p(phi) = (1/2pi) sum_d R_d e^{-i d phi}
/// (R_{-d} = conj R_d). R_1 equals <E>.
std::vector<Complex> relative_phase_coefficients(const PureTwoModeState& state);
std::vector<Complex> relative_phase_coefficients(const SectorMixture& mixture);

/// Relative-phase density from the phase-difference POVM
/// Pi(phi) = (1/2pi) sum_N (N+1) |N,phi><N,phi|.
/// Throws DomainError if K < 64 or K is odd, GridError if K is below the Nyquist bound.
PhaseDensity relative_phase_density(const PureTwoModeState& state, int grid_size);
PhaseDensity relative_phase_density(const SectorMixture& mixture, int grid_size);

/// p(phi1, phi2) = |sum c[m][n] e^{-i(m phi1 + n phi2)}|^2 / (2pi)^2.
JointPhaseDensity joint_local_phase_density(const PureTwoModeState& state, int grid_size);

/// Circular mean arg ∫ e^{i phi} p(phi) dphi.
double circular_mean(const PhaseDensity& density) noexcept;

/// Linear variance of phi after re-centering the principal interval at the
/// circular mean. Evaluated from the density's Fourier coefficients, which
/// is exact for band-limited densities on a Nyquist grid.
double linear_phase_variance(const PhaseDensity& density);

/// Measurement record of one local phase.
struct SampleSet {
  std::vector<double> phis;
  std::uint64_t seed = 0;

  std::size_t shots() const noexcept { return phis.size(); }
};

struct LocalPhaseSamples {
  SampleSet phi1;
  SampleSet phi2;
};

/// Draws (phi1, phi2) pairs from the joint local-phase law on a grid by
/// inverse CDF (marginal of phi1, then phi2 conditional on phi1). Samples are
/// grid points, so trigonometric moments of degree below K - cutoff are
/// reproduced without bias.
///
/// Shot i depends only on (seed, i): any partition of the shot range yields
/// the same samples as a single sequential run.
class LocalPhaseSampler {
 public:
  /// grid_size = 0 selects default_grid_size.
  explicit LocalPhaseSampler(const PureTwoModeState& state, int grid_size = 0);
  /// Sector first, then phi2 uniform and phi1 - phi2 from the sector's relative density.
  explicit LocalPhaseSampler(const SectorMixture& mixture, int grid_size = 0);

  int grid_size() const noexcept { return grid_; }

  std::pair<double, double> draw(std::uint64_t seed, std::uint64_t shot) const;

  LocalPhaseSamples sample(std::size_t shots, std::uint64_t seed, std::uint64_t first_shot = 0) const;

 private:
  double grid_phi(int k) const noexcept;

  int grid_ = 0;
  bool sectored_ = false;
  // Pure state: marginal CDF of k1 and K conditional CDFs of k2.
  std::vector<double> cdf1_;
  std::vector<double> cdf2_;
  // Sector mixture: CDF over sectors and per-sector CDF of the relative index.
  std::vector<double> sector_cdf_;
  std::vector<double> relative_cdf_;
};

LocalPhaseSamples sample_local_phases(const PureTwoModeState& state, std::size_t shots,
                                      std::uint64_t seed, int grid_size = 0);
LocalPhaseSamples sample_local_phases(const SectorMixture& mixture, std::size_t shots,
                                      std::uint64_t seed, int grid_size = 0);

struct DispersionEstimate {
  double d2_hat = 1.0;          ///< 1 − |mean e^{i(phi1 − phi2)}|²
  double std_error = 0.0;       ///< bootstrap standard error of d2_hat
  double bias_corrected = 1.0;  ///< n/(n−1) d2_hat, since E[d2_hat] = D²(1 − 1/n)
  Complex mean_phasor;
  std::size_t shots = 0;
};

struct EstimatorOptions {
  int resamples = 200;
  std::uint64_t seed = 0;
};

/// Plug-in relative dispersion with a nonparametric bootstrap error.
/// Throws DomainError for unequal shot counts, fewer than 2 shots or resamples < 2.
DispersionEstimate estimate_relative_dispersion(const SampleSet& phi1, const SampleSet& phi2,
                                                const EstimatorOptions& options = {});

}  // namespace numphase
