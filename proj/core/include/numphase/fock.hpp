#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace numphase {

using Complex = std::complex<double>;

/// Default tolerance on probability mass discarded by truncating an infinite sum.
inline constexpr double kDefaultTailTol = 1e-10;

/// Off-sector mass above this makes a state unusable as a fixed-N sector.
inline constexpr double kSectorLeakTol = 1e-14;

/// Pure state on the truncated two-mode Fock space {|m,n> : 0 <= m,n <= cutoff}.
///
/// Amplitudes are stored row-major, entry (m, n) holding <m,n|psi>. The state
/// is normalized on construction; retained_mass() keeps the squared norm seen
/// before renormalization so truncated families can report what they dropped.
class PureTwoModeState {
 public:
  /// Throws DomainError if cutoff < 0, the grid is not (cutoff+1)^2 or the norm is zero.
  static PureTwoModeState from_coefficients(int cutoff, std::vector<Complex> coeffs);

  static PureTwoModeState vacuum(int cutoff = 0);

  int cutoff() const noexcept { return cutoff_; }
  int dim() const noexcept { return cutoff_ + 1; }

  Complex operator()(int m, int n) const noexcept {
    return coeffs_[static_cast<std::size_t>(m) * static_cast<std::size_t>(dim()) +
                   static_cast<std::size_t>(n)];
  }

  std::span<const Complex> coefficients() const noexcept { return coeffs_; }

  double retained_mass() const noexcept { return retained_mass_; }

  /// Probability mass on basis states with m == cutoff or n == cutoff.
  double edge_mass() const noexcept;

 private:
  PureTwoModeState(int cutoff, std::vector<Complex> coeffs, double retained_mass)
      : cutoff_(cutoff), coeffs_(std::move(coeffs)), retained_mass_(retained_mass) {}

  int cutoff_;
  std::vector<Complex> coeffs_;
  double retained_mass_;
};

/// Pure state supported on the total-number sector N: amplitudes[m] is the
/// coefficient of |m, N-m>. Compact storage for sector mixtures.
class SectorState {
 public:
  /// Normalizes; throws DomainError if N < 0, size != N+1 or the norm is zero.
  SectorState(int total_number, std::vector<Complex> amplitudes);

  /// Restriction of a two-mode state to total number N. Throws SectorError
  /// naming N when the off-sector mass is >= kSectorLeakTol.
  static SectorState from_pure(const PureTwoModeState& state, int total_number);

  int total_number() const noexcept { return total_number_; }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }

  /// Embedding into a PureTwoModeState with cutoff N.
  PureTwoModeState to_pure() const;

 private:
  int total_number_;
  std::vector<Complex> amplitudes_;
};

/// |N, phi> = (N+1)^{-1/2} sum_m e^{i m phi} |m, N-m>. Throws DomainError for N < 0.
SectorState number_phase_sector(int total_number, double phi);
PureTwoModeState number_phase_state(int total_number, double phi);

/// Output of a beam splitter with transmissivity t fed by |N>|0>:
/// c[m][N-m] = sqrt(C(N,m) t^m (1-t)^(N-m)) e^{i m phi}. Throws DomainError
/// for N < 0 or t outside [0,1].
SectorState split_fock_sector(int total_number, double phi, double transmissivity);
PureTwoModeState split_fock_state(int total_number, double phi, double transmissivity);

/// Smallest M such that the two-mode squeezed vacuum loses less than
/// tail_tol of its mass when truncated at M photons per mode.
/// Throws DomainError for r < 0 or tail_tol outside (0,1).
int select_cutoff(double r, double tail_tol);

/// Exact mass of the two-mode squeezed vacuum beyond m = cutoff: tanh(r)^(2(cutoff+1)).
double tmss_tail_mass(double r, int cutoff);

/// Two-mode squeezed vacuum sum_m tanh(r)^m / cosh(r) |m,m>, truncated at
/// `cutoff` and renormalized. Throws TruncationError carrying the required
/// cutoff when the discarded mass would reach tail_tol.
PureTwoModeState two_mode_squeezed_state(double r, int cutoff,
                                         double tail_tol = kDefaultTailTol);

/// Same, with cutoff = select_cutoff(r, tail_tol).
PureTwoModeState auto_two_mode_squeezed_state(double r, double tail_tol = kDefaultTailTol);

/// Product state psi1 (x) psi2; each factor is normalized separately. The
/// shorter factor is zero-padded to the common cutoff.
PureTwoModeState product_state(std::span<const Complex> mode1, std::span<const Complex> mode2);

/// Probability mass function p(N) on a contiguous support [first(), last()].
class NumberDistribution {
 public:
  /// Renormalizes to unit mass. Throws DomainError on negative or non-finite
  /// masses, an empty list, zero total mass or first < 0.
  static NumberDistribution from_masses(int first, std::vector<double> masses);

  static NumberDistribution point_mass(int total_number);

  int first() const noexcept { return first_; }
  int last() const noexcept { return first_ + static_cast<int>(masses_.size()) - 1; }

  /// p(N); zero outside the support.
  double probability(int total_number) const noexcept;

  std::span<const double> masses() const noexcept { return masses_; }

  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }

  /// Total mass before renormalization, relative to the untruncated family.
  double retained_mass() const noexcept { return retained_mass_; }

  /// False when a Gaussian family was requested outside std << mean.
  bool regime_ok() const noexcept { return regime_ok_; }

 private:
  NumberDistribution() = default;

  friend NumberDistribution poissonian_distribution(double, double);
  friend NumberDistribution gaussian_distribution(double, double, double);
  friend NumberDistribution thermal_distribution(double, double);

  int first_ = 0;
  std::vector<double> masses_;
  double mean_ = 0.0;
  double variance_ = 0.0;
  double retained_mass_ = 1.0;
  bool regime_ok_ = true;
};

/// p(N) = mean^N e^{-mean} / N!, both tails dropped below tail_tol/2.
NumberDistribution poissonian_distribution(double mean, double tail_tol = kDefaultTailTol);

/// p(N) proportional to exp(-(N-mean)^2 / (2 std^2)) on integers N >= 0.
NumberDistribution gaussian_distribution(double mean, double std_dev,
                                         double tail_tol = kDefaultTailTol);

/// p(N) = (mean/(mean+1))^N / (mean+1), cut where the geometric tail drops below tail_tol.
NumberDistribution thermal_distribution(double mean, double tail_tol = kDefaultTailTol);

struct Sector {
  double weight;
  SectorState state;

  int total_number() const noexcept { return state.total_number(); }
};

/// rho = sum_N p(N) |psi_N><psi_N| with each |psi_N> of fixed total number N.
class SectorMixture {
 public:
  SectorMixture(NumberDistribution distribution, std::vector<Sector> sectors);

  std::span<const Sector> sectors() const noexcept { return sectors_; }
  const NumberDistribution& distribution() const noexcept { return distribution_; }
  int max_total_number() const noexcept;

 private:
  NumberDistribution distribution_;
  std::vector<Sector> sectors_;
};

using PureSectorBuilder = std::function<PureTwoModeState(int)>;
using SectorBuilder = std::function<SectorState(int)>;

/// Builds one sector per N with p(N) > 0. Throws SectorError naming the
/// first N whose builder output leaks out of the sector.
SectorMixture mixture_over_sectors(const NumberDistribution& distribution,
                                   const PureSectorBuilder& builder);

/// Same, for builders that already produce compact sector states.
SectorMixture mixture_over_sector_states(const NumberDistribution& distribution,
                                         const SectorBuilder& builder);

}  // namespace numphase
