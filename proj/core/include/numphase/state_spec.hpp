#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "numphase/fock.hpp"

namespace numphase {

// State-spec documents are JSON objects:
//
//   {"family": "number_phase", "N": 3, "phi": 0.0}
//   {"family": "split_fock", "N": 2, "phi": 0.0, "transmissivity": 0.5}
//   {"family": "tmss", "r": 1.0, "cutoff": 60}            (cutoff optional)
//   {"family": "vacuum"}
//   {"family": "mixture",
//    "distribution": {"type": "poissonian", "mean": 5}
//                  | {"type": "thermal", "mean": 1}
//                  | {"type": "gaussian", "mean": 100, "std": 3}   ("variance" instead of "std")
//                  | {"type": "point", "N": 3}
//                  | {"type": "custom", "first": 0, "probs": [0.5, 0.5]},
//    "sector": {"family": "number_phase" | "split_fock", "phi": 0, "transmissivity": 0.5}}
//
// Every document may carry "tail_tol" (default 1e-10). Unknown families and
// unknown keys are rejected with SpecError.
//
// The shorthand "family key=value ..." is also accepted, e.g.
//   "number_phase N=1"
//   "mixture dist=gaussian mean=100 variance=40 sector=number_phase phi=0"

struct NumberPhaseSpec {
  int n = 0;
  double phi = 0.0;
};

struct SplitFockSpec {
  int n = 0;
  double phi = 0.0;
  double transmissivity = 0.5;
};

struct TmssSpec {
  double r = 0.0;
  std::optional<int> cutoff;
};

struct DistributionSpec {
  enum class Kind { poissonian, gaussian, thermal, point, custom };
  Kind kind = Kind::poissonian;
  double mean = 0.0;
  double std_dev = 0.0;
  int n = 0;  // point mass
  int first = 0;
  std::vector<double> probs;
};

struct SectorSpec {
  enum class Family { number_phase, split_fock };
  Family family = Family::number_phase;
  double phi = 0.0;
  double transmissivity = 0.5;
};

struct MixtureSpec {
  DistributionSpec distribution;
  SectorSpec sector;
};

struct StateSpec {
  std::variant<NumberPhaseSpec, SplitFockSpec, TmssSpec, MixtureSpec> family;
  double tail_tol = kDefaultTailTol;
};

using BuiltState = std::variant<PureTwoModeState, SectorMixture>;

std::span<const std::string_view> known_families() noexcept;

/// Parses a JSON document or the key=value shorthand. Throws SpecError.
StateSpec parse_state_spec(std::string_view text);

std::string to_json(const StateSpec& spec);

/// Throws DomainError / TruncationError from the underlying constructors.
BuiltState build_state(const StateSpec& spec);

/// Sweep variables: N, r, mean, std, variance, transmissivity.
std::span<const std::string_view> sweep_variables() noexcept;

/// Copy of `spec` with one parameter replaced. Throws SpecError when the
/// variable does not apply to the spec's family.
StateSpec with_parameter(const StateSpec& spec, std::string_view variable, double value);

}  // namespace numphase
