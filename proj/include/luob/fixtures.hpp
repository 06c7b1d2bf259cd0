#pragma once

#include "luob/operators.hpp"

#include <optional>
#include <sstream>
#include <utility>

namespace luob {
namespace fixtures {

namespace detail_fx {

/// Sparse construction helper: entries are (party basis labels..., value),
/// 1-based labels for readability of the fixture tables below.
inline PureStateVector state(const SpaceShape& shape,
                             std::vector<std::pair<std::vector<int>, Complex>> kets) {
  Vector v = Vector::Zero(shape.total());
  for (auto& [labels, amp] : kets) {
    std::vector<int> idx;
    for (int l : labels) idx.push_back(l - 1);
    v(shape.flatten(idx)) = amp;
  }
  v /= v.norm();
  return PureStateVector(shape, v);
}

}  // namespace detail_fx

/// The four maximally entangled two-qubit states, in the fixed order the
/// subset fixtures index into.
inline std::vector<PureStateVector> bell_states() {
  SpaceShape shape({2, 2});
  const double s = 1.0 / std::sqrt(2.0);
  using detail_fx::state;
  return {
      state(shape, {{{1, 1}, s}, {{2, 2}, s}}),
      state(shape, {{{1, 1}, s}, {{2, 2}, -s}}),
      state(shape, {{{2, 1}, s}, {{1, 2}, s}}),
      state(shape, {{{2, 1}, -s}, {{1, 2}, s}}),
  };
}

/// Uniform mixture-free sum of the chosen Bell projectors (1-based indices).
inline HermitianOperator bell_operator(const std::vector<int>& subset) {
  if (subset.empty()) throw ValidationError("bell fixture: empty subset");
  std::vector<PureStateVector> all = bell_states();
  std::vector<PureStateVector> chosen;
  std::vector<double> weights;
  std::vector<bool> seen(4, false);
  for (int i : subset) {
    if (i < 1 || i > 4) throw ValidationError("bell fixture: index out of 1..4");
    if (seen[i - 1]) throw ValidationError("bell fixture: repeated index");
    seen[i - 1] = true;
    chosen.push_back(all[i - 1]);
    weights.push_back(1.0);
  }
  return from_pure_states(SpaceShape({2, 2}), chosen, weights);
}

/// Phase family on 3x3: three orthonormal generators whose A-side pencil has
/// determinant in the one-parameter plane-cubic family. eta = (0,0,0) gives
/// the degenerate (three-line) member.
inline HermitianOperator phase_family_operator(double eta1, double eta2,
                                               double eta3) {
  SpaceShape shape({3, 3});
  const double c = 1.0 / std::sqrt(3.0);
  auto phase = [&](double t) { return c * Complex(std::cos(t), std::sin(t)); };
  using detail_fx::state;
  std::vector<PureStateVector> gen = {
      state(shape, {{{1, 1}, phase(eta1)}, {{2, 2}, c}, {{3, 3}, c}}),
      state(shape, {{{1, 2}, phase(eta2)}, {{2, 3}, c}, {{3, 1}, c}}),
      state(shape, {{{1, 3}, phase(eta3)}, {{2, 1}, c}, {{3, 2}, c}}),
  };
  return from_pure_states(shape, gen, {1.0, 1.0, 1.0});
}

/// Two-parameter 3x3 family whose A-side determinant splits into three lines
/// r1 + r2, r1 + v*r2, r1 + lambda*r2 while the B-side determinant is
/// (lambda - v) * s2^2 * s3: the two sides are genuinely different curves.
inline HermitianOperator two_parameter_operator(double v, double lambda) {
  if (v == lambda)
    throw ValidationError("two-parameter fixture: parameters must differ");
  SpaceShape shape({3, 3});
  const double c1 = 1.0 / std::sqrt(3.0);
  const double c2 = 1.0 / std::sqrt(1.0 + v * v);
  const double c3 = 1.0 / std::sqrt(1.0 + lambda * lambda);
  using detail_fx::state;
  std::vector<PureStateVector> gen = {
      state(shape, {{{1, 1}, c1}, {{2, 1}, c1}, {{3, 2}, c1}}),
      state(shape, {{{1, 2}, c2}, {{2, 2}, c2 * v}}),
      state(shape, {{{1, 3}, c3}, {{2, 3}, c3 * lambda}}),
  };
  return from_pure_states(shape, gen, {1.0, 1.0, 1.0});
}

/// Equal-rank 2x2 pair with different A-side point loci: the first operator
/// mixes two maximally entangled states, the second a maximally entangled
/// state with a product state.
inline std::pair<HermitianOperator, HermitianOperator> rank2_pair() {
  SpaceShape shape({2, 2});
  const double s = 1.0 / std::sqrt(2.0);
  using detail_fx::state;
  HermitianOperator left = bell_operator({1, 2});
  std::vector<PureStateVector> gen = {
      state(shape, {{{1, 1}, s}, {{2, 2}, s}}),
      state(shape, {{{1, 2}, 1.0}}),
  };
  HermitianOperator right = from_pure_states(shape, gen, {1.0, 1.0});
  return {std::move(left), std::move(right)};
}

/// Rank-1 vs rank-2 pair on 3x3 for the maximal-Schmidt-rank criterion: a
/// maximally entangled projector against a rank-2 operator supported on a
/// 2x2 corner (whose rank-0 locus is the nonempty point (0:0:1)).
inline std::pair<HermitianOperator, HermitianOperator> schmidt_pair() {
  SpaceShape shape({3, 3});
  const double c = 1.0 / std::sqrt(3.0);
  const double s = 1.0 / std::sqrt(2.0);
  using detail_fx::state;
  HermitianOperator left = from_pure_states(
      shape,
      {state(shape, {{{1, 1}, c}, {{2, 2}, c}, {{3, 3}, c}})},
      {1.0});
  std::vector<PureStateVector> gen = {
      state(shape, {{{1, 1}, s}, {{2, 2}, s}}),
      state(shape, {{{1, 1}, s}, {{2, 2}, -s}}),
  };
  HermitianOperator right = from_pure_states(shape, gen, {1.0, 1.0});
  return {std::move(left), std::move(right)};
}

/// Equal-rank three-qubit pair whose single-party and two-party loci differ
/// in dimension and point structure.
inline std::pair<HermitianOperator, HermitianOperator> three_qubit_pair() {
  SpaceShape shape({2, 2, 2});
  const double s = 1.0 / std::sqrt(2.0);
  using detail_fx::state;
  std::vector<PureStateVector> gen_left = {
      state(shape, {{{1, 2, 1}, s}, {{1, 2, 2}, -s}}),
      state(shape, {{{2, 1, 1}, s}, {{2, 2, 1}, -s}}),
      state(shape, {{{1, 1, 2}, s}, {{2, 1, 2}, -s}}),
      state(shape, {{{1, 1, 1}, s}, {{2, 2, 2}, -s}}),
  };
  std::vector<PureStateVector> gen_right = {
      state(shape, {{{1, 1, 1}, s}, {{2, 1, 1}, -s}}),
      state(shape, {{{1, 1, 2}, s}, {{2, 1, 2}, -s}}),
      state(shape, {{{1, 2, 1}, s}, {{2, 2, 1}, -s}}),
      state(shape, {{{1, 2, 2}, s}, {{2, 2, 2}, -s}}),
  };
  return {from_pure_states(shape, gen_left, {1, 1, 1, 1}),
          from_pure_states(shape, gen_right, {1, 1, 1, 1})};
}

struct FixtureEntry {
  std::string id;
  std::string summary;
};

inline std::vector<FixtureEntry> catalog() {
  return {
      {"bell:<indices>",
       "sum of the chosen Bell projectors on 2x2 (indices 1-4, e.g. bell:12)"},
      {"example1[:eta1,eta2,eta3]",
       "phase family on 3x3 with plane-cubic determinant (default 0,0,0)"},
      {"example2[:v,lambda]",
       "two-parameter 3x3 family with asymmetric A/B loci (default 2,3)"},
      {"example3[:prime]",
       "equal-rank 2x2 pair with different point loci"},
      {"example4[:prime]",
       "maximal-Schmidt-rank projector vs corner-supported rank-2 operator"},
      {"example5[:prime]",
       "equal-rank three-qubit pair with different two-party loci"},
  };
}

namespace detail_fx {

inline std::vector<double> parse_params(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("fixture parameter is not a number: '" + item + "'");
    }
  }
  return out;
}

}  // namespace detail_fx

/// Resolve a fixture id of the form name[:params] to a pair. Single-operator
/// fixtures have no second element.
inline std::pair<HermitianOperator, std::optional<HermitianOperator>>
resolve_fixture(const std::string& id) {
  std::string name = id, params;
  if (auto colon = id.find(':'); colon != std::string::npos) {
    name = id.substr(0, colon);
    params = id.substr(colon + 1);
  }
  const bool prime = params == "prime";
  auto no_params = [&](const char* what) {
    if (!params.empty() && !prime)
      throw ValidationError(std::string(what) + ": unexpected parameters '" +
                            params + "'");
  };
  auto pair_of = [&](std::pair<HermitianOperator, HermitianOperator> p)
      -> std::pair<HermitianOperator, std::optional<HermitianOperator>> {
    if (prime) return {std::move(p.second), std::nullopt};
    return {std::move(p.first), std::move(p.second)};
  };
  if (name == "bell") {
    if (prime || params.empty())
      throw ValidationError("bell fixture needs indices, e.g. bell:12");
    std::vector<int> subset;
    for (char c : params) {
      if (c < '1' || c > '4')
        throw ValidationError("bell fixture: indices must be digits 1-4");
      subset.push_back(c - '0');
    }
    return {bell_operator(subset), std::nullopt};
  }
  if (name == "example1") {
    std::vector<double> eta = {0, 0, 0};
    if (!params.empty()) {
      if (prime) throw ValidationError("example1 has no primed element");
      eta = detail_fx::parse_params(params);
      if (eta.size() != 3)
        throw ValidationError("example1 takes three phases, e.g. example1:0,0,3.14");
    }
    return {phase_family_operator(eta[0], eta[1], eta[2]), std::nullopt};
  }
  if (name == "example2") {
    std::vector<double> vl = {2, 3};
    if (!params.empty()) {
      if (prime) throw ValidationError("example2 has no primed element");
      vl = detail_fx::parse_params(params);
      if (vl.size() != 2)
        throw ValidationError("example2 takes two parameters, e.g. example2:2,3");
    }
    return {two_parameter_operator(vl[0], vl[1]), std::nullopt};
  }
  if (name == "example3") { no_params("example3"); return pair_of(rank2_pair()); }
  if (name == "example4") { no_params("example4"); return pair_of(schmidt_pair()); }
  if (name == "example5") { no_params("example5"); return pair_of(three_qubit_pair()); }
  throw ValidationError("unknown fixture '" + name +
                        "' (try the 'examples' command for the list)");
}

/// Known caveats about a fixture, attached to reports that use it. Keyed by
/// the bare fixture name (parameters stripped).
inline std::vector<std::string> advisories(const std::string& id) {
  const std::string name = id.substr(0, id.find(':'));
  if (name == "example5") {
    return {"the A:B k=1 locus of the second operator is the one-dimensional "
            "set {(1:1)} x CP^1 (verified against a dense grid rank scan); "
            "descriptions of this pair that list finitely many points for it "
            "repeat one point and miss the one-parameter family"};
  }
  return {};
}

}  // namespace fixtures
}  // namespace luob
