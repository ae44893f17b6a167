#include "numphase/state_spec.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include "json.hpp"
#include "numphase/errors.hpp"

namespace numphase {

namespace {

using json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 5> kFamilies{"number_phase", "split_fock", "tmss", "mixture",
                                                    "vacuum"};
constexpr std::array<std::string_view, 6> kSweepVariables{"N",        "r",        "mean",
                                                          "std",      "variance", "transmissivity"};

std::string family_list() {
  std::string s;
  for (auto f : kFamilies) {
    if (!s.empty()) s += ", ";
    s += f;
  }
  return s;
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw SpecError("unknown key \"" + key + "\" in " + std::string(where));
  }
}

double get_number(const json& obj, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw SpecError(std::string("missing required field \"") + key + "\"");
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) throw SpecError(std::string("field \"") + key + "\" must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw SpecError(std::string("field \"") + key + "\" must be finite");
  return x;
}

int get_int(const json& obj, const char* key, std::optional<int> fallback = std::nullopt) {
  const double x = get_number(obj, key, fallback ? std::optional<double>(*fallback) : std::nullopt);
  if (x != std::floor(x) || x < 0 || x > 1e7) {
    throw SpecError(std::string("field \"") + key + "\" must be a non-negative integer");
  }
  return static_cast<int>(x);
}

std::string get_string(const json& obj, const char* key) {
  if (!obj.contains(key)) throw SpecError(std::string("missing required field \"") + key + "\"");
  const auto& v = obj.at(key);
  if (!v.is_string()) throw SpecError(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

DistributionSpec parse_distribution(const json& d) {
  if (!d.is_object()) throw SpecError("\"distribution\" must be an object");
  DistributionSpec out;
  const auto type = get_string(d, "type");
  if (type == "poissonian" || type == "thermal") {
    check_keys(d, {"type", "mean"}, "distribution");
    out.kind = type == "poissonian" ? DistributionSpec::Kind::poissonian : DistributionSpec::Kind::thermal;
    out.mean = get_number(d, "mean");
  } else if (type == "gaussian") {
    check_keys(d, {"type", "mean", "std", "variance"}, "distribution");
    out.kind = DistributionSpec::Kind::gaussian;
    out.mean = get_number(d, "mean");
    if (d.contains("std") == d.contains("variance")) {
      throw SpecError("gaussian distribution needs exactly one of \"std\" or \"variance\"");
    }
    out.std_dev = d.contains("std") ? get_number(d, "std") : std::sqrt(std::max(0.0, get_number(d, "variance")));
  } else if (type == "point") {
    check_keys(d, {"type", "N"}, "distribution");
    out.kind = DistributionSpec::Kind::point;
    out.n = get_int(d, "N");
  } else if (type == "custom") {
    check_keys(d, {"type", "first", "probs"}, "distribution");
    out.kind = DistributionSpec::Kind::custom;
    out.first = get_int(d, "first", 0);
    if (!d.contains("probs") || !d.at("probs").is_array()) {
      throw SpecError("custom distribution needs a \"probs\" array");
    }
    for (const auto& p : d.at("probs")) {
      if (!p.is_number()) throw SpecError("\"probs\" entries must be numbers");
      out.probs.push_back(p.get<double>());
    }
  } else {
    throw SpecError("unknown distribution type \"" + type +
                    "\"; known types: poissonian, gaussian, thermal, point, custom");
  }
  return out;
}

SectorSpec parse_sector(const json& s) {
  if (!s.is_object()) throw SpecError("\"sector\" must be an object");
  check_keys(s, {"family", "phi", "transmissivity"}, "sector");
  SectorSpec out;
  const auto fam = get_string(s, "family");
  if (fam == "number_phase") {
    out.family = SectorSpec::Family::number_phase;
  } else if (fam == "split_fock") {
    out.family = SectorSpec::Family::split_fock;
  } else {
    throw SpecError("unknown sector family \"" + fam + "\"; known sector families: number_phase, split_fock");
  }
  out.phi = get_number(s, "phi", 0.0);
  out.transmissivity = get_number(s, "transmissivity", 0.5);
  return out;
}

StateSpec from_json(const json& j) {
  if (!j.is_object()) throw SpecError("state spec must be a JSON object");
  StateSpec spec;
  const auto family = get_string(j, "family");
  spec.tail_tol = get_number(j, "tail_tol", kDefaultTailTol);
  if (!(spec.tail_tol > 0.0 && spec.tail_tol < 1.0)) throw SpecError("\"tail_tol\" must lie in (0,1)");

  if (family == "number_phase") {
    check_keys(j, {"family", "N", "phi", "tail_tol"}, "number_phase spec");
    spec.family = NumberPhaseSpec{get_int(j, "N"), get_number(j, "phi", 0.0)};
  } else if (family == "vacuum") {
    check_keys(j, {"family", "tail_tol"}, "vacuum spec");
    spec.family = NumberPhaseSpec{0, 0.0};
  } else if (family == "split_fock") {
    check_keys(j, {"family", "N", "phi", "transmissivity", "tail_tol"}, "split_fock spec");
    spec.family = SplitFockSpec{get_int(j, "N"), get_number(j, "phi", 0.0), get_number(j, "transmissivity", 0.5)};
  } else if (family == "tmss") {
    check_keys(j, {"family", "r", "cutoff", "tail_tol"}, "tmss spec");
    TmssSpec t;
    t.r = get_number(j, "r");
    if (j.contains("cutoff")) t.cutoff = get_int(j, "cutoff");
    spec.family = t;
  } else if (family == "mixture") {
    check_keys(j, {"family", "distribution", "sector", "tail_tol"}, "mixture spec");
    if (!j.contains("distribution")) throw SpecError("mixture spec needs a \"distribution\"");
    MixtureSpec m;
    m.distribution = parse_distribution(j.at("distribution"));
    if (j.contains("sector")) m.sector = parse_sector(j.at("sector"));
    spec.family = m;
  } else {
    throw SpecError("unknown state family \"" + family + "\"; known families: " + family_list());
  }
  return spec;
}

json shorthand_value(const std::string& text) {
  if (text.find(',') != std::string::npos) {
    json arr = json::array();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) arr.push_back(shorthand_value(item));
    return arr;
  }
  char* end = nullptr;
  const double x = std::strtod(text.c_str(), &end);
  if (!text.empty() && end == text.c_str() + text.size()) return x;
  return text;
}

json shorthand_to_json(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string family;
  if (!(in >> family)) throw SpecError("empty state spec");
  json j;
  j["family"] = family;
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw SpecError("expected key=value in state shorthand, got \"" + token + "\"");
    }
    const std::string key = token.substr(0, eq);
    const json value = shorthand_value(token.substr(eq + 1));
    if (family != "mixture" || key == "tail_tol") {
      j[key] = value;
    } else if (key == "dist" || key == "type") {
      j["distribution"]["type"] = value;
    } else if (key == "mean" || key == "std" || key == "variance" || key == "first" || key == "probs" ||
               key == "N") {
      j["distribution"][key] = value;
    } else if (key == "sector") {
      j["sector"]["family"] = value;
    } else if (key == "phi" || key == "transmissivity") {
      j["sector"][key] = value;
    } else {
      throw SpecError("unknown key \"" + key + "\" in mixture shorthand");
    }
  }
  if (family == "mixture" && j.contains("sector") && !j["sector"].contains("family")) {
    j["sector"]["family"] = "number_phase";
  }
  return j;
}

json distribution_json(const DistributionSpec& d) {
  json j;
  switch (d.kind) {
    case DistributionSpec::Kind::poissonian:
      j["type"] = "poissonian";
      j["mean"] = d.mean;
      break;
    case DistributionSpec::Kind::thermal:
      j["type"] = "thermal";
      j["mean"] = d.mean;
      break;
    case DistributionSpec::Kind::gaussian:
      j["type"] = "gaussian";
      j["mean"] = d.mean;
      j["std"] = d.std_dev;
      break;
    case DistributionSpec::Kind::point:
      j["type"] = "point";
      j["N"] = d.n;
      break;
    case DistributionSpec::Kind::custom:
      j["type"] = "custom";
      j["first"] = d.first;
      j["probs"] = d.probs;
      break;
  }
  return j;
}

NumberDistribution build_distribution(const DistributionSpec& d, double tail_tol) {
  switch (d.kind) {
    case DistributionSpec::Kind::poissonian:
      return poissonian_distribution(d.mean, tail_tol);
    case DistributionSpec::Kind::thermal:
      return thermal_distribution(d.mean, tail_tol);
    case DistributionSpec::Kind::gaussian:
      return gaussian_distribution(d.mean, d.std_dev, tail_tol);
    case DistributionSpec::Kind::point:
      return NumberDistribution::point_mass(d.n);
    case DistributionSpec::Kind::custom:
      return NumberDistribution::from_masses(d.first, d.probs);
  }
  throw SpecError("unhandled distribution kind");
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::span<const std::string_view> known_families() noexcept { return kFamilies; }
std::span<const std::string_view> sweep_variables() noexcept { return kSweepVariables; }

StateSpec parse_state_spec(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw SpecError("empty state spec");
  if (text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw SpecError(std::string("state spec is not valid JSON: ") + e.what());
    }
    return from_json(j);
  }
  return from_json(shorthand_to_json(text));
}

std::string to_json(const StateSpec& spec) {
  json j;
  std::visit(overloaded{
                 [&](const NumberPhaseSpec& s) {
                   j["family"] = "number_phase";
                   j["N"] = s.n;
                   j["phi"] = s.phi;
                 },
                 [&](const SplitFockSpec& s) {
                   j["family"] = "split_fock";
                   j["N"] = s.n;
                   j["phi"] = s.phi;
                   j["transmissivity"] = s.transmissivity;
                 },
                 [&](const TmssSpec& s) {
                   j["family"] = "tmss";
                   j["r"] = s.r;
                   if (s.cutoff) j["cutoff"] = *s.cutoff;
                 },
                 [&](const MixtureSpec& s) {
                   j["family"] = "mixture";
                   j["distribution"] = distribution_json(s.distribution);
                   json sec;
                   sec["family"] = s.sector.family == SectorSpec::Family::number_phase ? "number_phase"
                                                                                        : "split_fock";
                   sec["phi"] = s.sector.phi;
                   sec["transmissivity"] = s.sector.transmissivity;
                   j["sector"] = sec;
                 },
             },
             spec.family);
  j["tail_tol"] = spec.tail_tol;
  return j.dump();
}

BuiltState build_state(const StateSpec& spec) {
  return std::visit(
      overloaded{
          [&](const NumberPhaseSpec& s) -> BuiltState { return number_phase_state(s.n, s.phi); },
          [&](const SplitFockSpec& s) -> BuiltState {
            return split_fock_state(s.n, s.phi, s.transmissivity);
          },
          [&](const TmssSpec& s) -> BuiltState {
            return s.cutoff ? two_mode_squeezed_state(s.r, *s.cutoff, spec.tail_tol)
                            : auto_two_mode_squeezed_state(s.r, spec.tail_tol);
          },
          [&](const MixtureSpec& s) -> BuiltState {
            const auto dist = build_distribution(s.distribution, spec.tail_tol);
            const auto sector = s.sector;
            if (sector.family == SectorSpec::Family::number_phase) {
              return mixture_over_sector_states(dist, [&](int n) { return number_phase_sector(n, sector.phi); });
            }
            return mixture_over_sector_states(
                dist, [&](int n) { return split_fock_sector(n, sector.phi, sector.transmissivity); });
          },
      },
      spec.family);
}

StateSpec with_parameter(const StateSpec& spec, std::string_view variable, double value) {
  StateSpec out = spec;
  auto as_count = [&]() {
    if (value != std::floor(value) || value < 0) {
      throw SpecError("sweep variable N needs non-negative integer values, got " + std::to_string(value));
    }
    return static_cast<int>(value);
  };
  auto reject = [&]() {
    return SpecError("sweep variable \"" + std::string(variable) + "\" does not apply to this state family");
  };
  std::visit(overloaded{
                 [&](NumberPhaseSpec& s) {
                   if (variable != "N") throw reject();
                   s.n = as_count();
                 },
                 [&](SplitFockSpec& s) {
                   if (variable == "N") {
                     s.n = as_count();
                   } else if (variable == "transmissivity") {
                     s.transmissivity = value;
                   } else {
                     throw reject();
                   }
                 },
                 [&](TmssSpec& s) {
                   if (variable != "r") throw reject();
                   s.r = value;
                 },
                 [&](MixtureSpec& s) {
                   auto& d = s.distribution;
                   using Kind = DistributionSpec::Kind;
                   if (variable == "mean" &&
                       (d.kind == Kind::poissonian || d.kind == Kind::thermal || d.kind == Kind::gaussian)) {
                     d.mean = value;
                   } else if (variable == "std" && d.kind == Kind::gaussian) {
                     d.std_dev = value;
                   } else if (variable == "variance" && d.kind == Kind::gaussian) {
                     if (value < 0) throw SpecError("variance must be non-negative");
                     d.std_dev = std::sqrt(value);
                   } else if (variable == "N" && d.kind == Kind::point) {
                     d.n = as_count();
                   } else if (variable == "transmissivity" && s.sector.family == SectorSpec::Family::split_fock) {
                     s.sector.transmissivity = value;
                   } else {
                     throw reject();
                   }
                 },
             },
             out.family);
  return out;
}

}  // namespace numphase
