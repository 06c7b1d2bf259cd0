#pragma once

#include "luob/fixtures.hpp"
#include "luob/locus.hpp"

#include <array>
#include <optional>
#include <sstream>
#include <utility>

namespace luob {

/// Outcome of a comparison run. NoObstructionDetected is deliberately not a
/// claim of simulability — the invariants are one-directional.
enum class Verdict { kNoObstructionDetected, kObstruction, kPreconditionFailed };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kNoObstructionDetected: return "NO_OBSTRUCTION_DETECTED";
    case Verdict::kObstruction: return "OBSTRUCTION";
    case Verdict::kPreconditionFailed: return "PRECONDITION_FAILED";
  }
  return "?";
}

inline std::string cut_label(const std::vector<int>& cut) {
  std::string s;
  for (std::size_t i = 0; i < cut.size(); ++i) {
    if (i) s += ":";
    s += SpaceShape::party_label(cut[i]);
  }
  return s;
}

/// One compared invariant: the pair of signatures for a (cut, k) slot.
struct InvariantRow {
  std::vector<int> cut;
  std::string label;  // "A", "B", "A:B", ...
  int k = 0;
  LocusSignature left;
  LocusSignature right;
  bool distinguished = false;
  std::string reason;
};

struct Witness {
  std::string cut;
  int k = 0;
  std::string reason;
};

struct ComparisonReport {
  std::string check;  // "theorem1", "theorem2", "theorem3", "swap", "hesse"
  int rank_left = 0;
  int rank_right = 0;
  bool trace_match = true;
  std::vector<InvariantRow> rows;
  Verdict verdict = Verdict::kNoObstructionDetected;
  std::optional<Witness> witness;
  std::vector<std::string> notes;
  std::uint64_t seed = 0;
};

namespace detail {

inline bool traces_match(const HermitianOperator& a, const HermitianOperator& b) {
  const double scale =
      std::max({1.0, std::abs(a.trace()), std::abs(b.trace())});
  return std::abs(a.trace() - b.trace()) <= 1e-9 * scale;
}

/// Compare one (cut, k) slot of two operators and append the row.
inline void compare_slot(ComparisonReport& report, const HermitianOperator& left,
                         const HermitianOperator& right,
                         const std::vector<int>& cut, int k, std::uint64_t seed,
                         const SearchParams& params, const Tolerances& tol) {
  InvariantRow row;
  row.cut = cut;
  row.label = cut_label(cut);
  row.k = k;
  const std::uint64_t salt =
      0xc0 + 97 * static_cast<std::uint64_t>(report.rows.size());
  row.left = signature(make_locus(left, cut, k, tol),
                       mix_seed(seed, salt), params);
  row.right = signature(make_locus(right, cut, k, tol),
                        mix_seed(seed, salt + 1), params);
  if (auto why = distinguishing_field(row.left, row.right, tol)) {
    row.distinguished = true;
    row.reason = *why;
  }
  report.rows.push_back(std::move(row));
}

inline void settle_verdict(ComparisonReport& report) {
  for (const InvariantRow& row : report.rows) {
    if (!row.distinguished) continue;
    report.verdict = Verdict::kObstruction;
    report.witness = Witness{row.label, row.k, row.reason};
    return;
  }
  report.verdict = Verdict::kNoObstructionDetected;
}

inline std::vector<std::vector<int>> proper_subsets(const SpaceShape& shape) {
  const int p = shape.parties();
  std::vector<std::vector<int>> cuts;
  for (int mask = 1; mask < (1 << p) - 1; ++mask) {
    std::vector<int> cut;
    for (int i = 0; i < p; ++i)
      if (mask & (1 << i)) cut.push_back(i);
    cuts.push_back(std::move(cut));
  }
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

inline int complement_dim(const SpaceShape& shape, const std::vector<int>& cut) {
  std::vector<bool> in(shape.parties(), false);
  for (int p : cut) in[p] = true;
  int d = 1;
  for (int p = 0; p < shape.parties(); ++p)
    if (!in[p]) d *= shape.dim(p);
  return d;
}

}  // namespace detail

/// Equal-rank bipartite comparison: every A-side and B-side locus of the two
/// operators must coincide for the simulation order to hold, so any
/// signature difference certifies an obstruction. Unequal ranks are outside
/// the theorem's hypotheses and yield PRECONDITION_FAILED.
inline ComparisonReport theorem1_check(const HermitianOperator& left,
                                       const HermitianOperator& right,
                                       std::uint64_t seed,
                                       const SearchParams& params = {},
                                       const Tolerances& tol = {}) {
  if (left.shape() != right.shape())
    throw ValidationError("theorem1_check: operators on different spaces");
  if (left.shape().parties() != 2)
    throw ValidationError("theorem1_check: operators are not bipartite");
  ComparisonReport report;
  report.check = "theorem1";
  report.seed = seed;
  report.rank_left = operator_rank(left, tol);
  report.rank_right = operator_rank(right, tol);
  report.trace_match = detail::traces_match(left, right);
  if (!report.trace_match)
    report.notes.push_back(
        "traces differ; the simulation order additionally requires equal traces");
  if (report.rank_left != report.rank_right) {
    report.verdict = Verdict::kPreconditionFailed;
    report.notes.push_back(
        "ranks differ (" + std::to_string(report.rank_left) + " vs " +
        std::to_string(report.rank_right) +
        "); the equal-rank comparison does not apply");
    return report;
  }
  if (report.rank_left == 1) {
    auto lv = range_basis(left, tol), rv = range_basis(right, tol);
    const int sl = schmidt_rank(lv.front(), {0}, tol);
    const int sr = schmidt_rank(rv.front(), {0}, tol);
    if (sl != sr)
      report.notes.push_back("rank-1 operators with differing Schmidt ranks (" +
                             std::to_string(sl) + " vs " + std::to_string(sr) +
                             ")");
  }
  const int dim_a = left.shape().dim(0), dim_b = left.shape().dim(1);
  for (int k = 0; k < dim_b; ++k)
    detail::compare_slot(report, left, right, {0}, k, seed, params, tol);
  for (int k = 0; k < dim_a; ++k)
    detail::compare_slot(report, left, right, {1}, k, seed, params, tol);
  detail::settle_verdict(report);
  return report;
}

/// Maximal-Schmidt-rank criterion: when the range of `left` contains a state
/// of maximal Schmidt rank and the rank-0 locus of `right` is nonempty, no
/// local-unitary mixture of `left` equals `right`. No rank precondition.
inline ComparisonReport theorem2_check(const HermitianOperator& left,
                                       const HermitianOperator& right,
                                       std::uint64_t seed,
                                       const SearchParams& params = {},
                                       const Tolerances& tol = {}) {
  if (left.shape() != right.shape())
    throw ValidationError("theorem2_check: operators on different spaces");
  if (left.shape().parties() != 2)
    throw ValidationError("theorem2_check: operators are not bipartite");
  ComparisonReport report;
  report.check = "theorem2";
  report.seed = seed;
  report.rank_left = operator_rank(left, tol);
  report.rank_right = operator_rank(right, tol);
  report.trace_match = detail::traces_match(left, right);
  const int max_possible = std::min(left.shape().dim(0), left.shape().dim(1));
  const int smax = max_schmidt_rank_in_range(left, {0},
                                             detail::mix_seed(seed, 0x7e2), 64,
                                             tol);
  InvariantRow row;
  row.cut = {0};
  row.label = "A";
  row.k = 0;
  row.left = signature(make_locus(left, {0}, 0, tol),
                       detail::mix_seed(seed, 0x7e3), params);
  row.right = signature(make_locus(right, {0}, 0, tol),
                        detail::mix_seed(seed, 0x7e4), params);
  const bool rank0_nonempty = !row.right.empty;
  report.rows.push_back(row);
  report.notes.push_back("max Schmidt rank in range: " + std::to_string(smax) +
                         " of " + std::to_string(max_possible) +
                         " (spectral basis plus 64 random range combinations)");
  if (smax == max_possible && rank0_nonempty) {
    report.verdict = Verdict::kObstruction;
    report.witness =
        Witness{"A", 0,
                "range contains a maximal-Schmidt-rank state while the "
                "candidate's rank-0 locus is nonempty"};
    for (InvariantRow& r : report.rows) {
      r.distinguished = true;
      r.reason = report.witness->reason;
    }
  } else {
    report.verdict = Verdict::kNoObstructionDetected;
    if (smax != max_possible)
      report.notes.push_back("hypothesis not met: no maximal-Schmidt-rank state found");
    if (!rank0_nonempty)
      report.notes.push_back("hypothesis not met: candidate rank-0 locus is empty");
  }
  return report;
}

/// Multipartite version of the equal-rank comparison: loci across every
/// nonempty proper cut (or a chosen list), with k up to min(complement
/// dimension, rank) - 1.
inline ComparisonReport theorem3_check(
    const HermitianOperator& left, const HermitianOperator& right,
    std::uint64_t seed,
    std::optional<std::vector<std::vector<int>>> cuts = std::nullopt,
    const SearchParams& params = {}, const Tolerances& tol = {}) {
  if (left.shape() != right.shape())
    throw ValidationError("theorem3_check: operators on different spaces");
  if (left.shape().parties() < 2)
    throw ValidationError("theorem3_check: need at least two parties");
  ComparisonReport report;
  report.check = "theorem3";
  report.seed = seed;
  report.rank_left = operator_rank(left, tol);
  report.rank_right = operator_rank(right, tol);
  report.trace_match = detail::traces_match(left, right);
  if (!report.trace_match)
    report.notes.push_back(
        "traces differ; the simulation order additionally requires equal traces");
  if (report.rank_left != report.rank_right) {
    report.verdict = Verdict::kPreconditionFailed;
    report.notes.push_back(
        "ranks differ (" + std::to_string(report.rank_left) + " vs " +
        std::to_string(report.rank_right) +
        "); the equal-rank comparison does not apply");
    return report;
  }
  std::vector<std::vector<int>> cut_list =
      cuts ? *cuts : detail::proper_subsets(left.shape());
  for (const std::vector<int>& cut : cut_list) {
    if (cut.empty() ||
        static_cast<int>(cut.size()) >= left.shape().parties())
      throw ValidationError("theorem3_check: cuts must be nonempty proper subsets");
    std::vector<bool> seen(left.shape().parties(), false);
    for (int p : cut) {
      if (p < 0 || p >= left.shape().parties())
        throw ValidationError("theorem3_check: cut party index out of range");
      if (seen[p])
        throw ValidationError("theorem3_check: cut repeats a party");
      seen[p] = true;
    }
    bool degenerate_party = false;
    for (int p : cut)
      if (left.shape().dim(p) < 2) degenerate_party = true;
    if (degenerate_party) {
      report.notes.push_back("cut " + cut_label(cut) +
                             " skipped: one-dimensional party");
      continue;
    }
    const int kmax =
        std::min(detail::complement_dim(left.shape(), cut), report.rank_left);
    for (int k = 0; k < kmax; ++k)
      detail::compare_slot(report, left, right, cut, k, seed, params, tol);
  }
  detail::settle_verdict(report);
  return report;
}

/// Compare the A-side and B-side loci of one operator by conjugating with
/// the tensor flip and running the equal-rank comparison. An obstruction
/// means the operator cannot simulate its own swap (and vice versa).
inline ComparisonReport corollary2_swap_check(const HermitianOperator& h,
                                              std::uint64_t seed,
                                              const SearchParams& params = {},
                                              const Tolerances& tol = {}) {
  ComparisonReport report =
      theorem1_check(h, swap_conjugate(h, tol), seed, params, tol);
  report.check = "swap";
  report.notes.insert(report.notes.begin(),
                      "right operand is the tensor flip of the left");
  return report;
}

/// Compare two members of the phase family through their plane-cubic
/// classes: obstruction when the degeneracy flags differ, or when both are
/// smooth with different moduli values.
inline ComparisonReport hesse_family_check(const HermitianOperator& left,
                                           const HermitianOperator& right,
                                           std::uint64_t seed,
                                           const SearchParams& params = {},
                                           const Tolerances& tol = {}) {
  if (left.shape() != right.shape() ||
      left.shape().dims() != std::vector<int>{3, 3})
    throw ValidationError("hesse_family_check: operators must live on 3x3");
  ComparisonReport report;
  report.check = "hesse";
  report.seed = seed;
  report.rank_left = operator_rank(left, tol);
  report.rank_right = operator_rank(right, tol);
  report.trace_match = detail::traces_match(left, right);
  InvariantRow row;
  row.cut = {0};
  row.label = "A";
  row.k = 2;
  row.left = signature(make_locus(left, {0}, 2, tol),
                       detail::mix_seed(seed, 0xbd), params);
  row.right = signature(make_locus(right, {0}, 2, tol),
                        detail::mix_seed(seed, 0xbe), params);
  if (!row.left.cubic || !row.right.cubic) {
    report.rows.push_back(std::move(row));
    report.verdict = Verdict::kPreconditionFailed;
    report.notes.push_back(
        "a determinant curve is outside the phase family; no cubic class");
    return report;
  }
  const CubicClassification& ca = *row.left.cubic;
  const CubicClassification& cb = *row.right.cubic;
  if (ca.degenerate != cb.degenerate) {
    row.distinguished = true;
    row.reason = std::string("cubic degeneracy differs (") +
                 (ca.degenerate ? "three lines" : "smooth") + " vs " +
                 (cb.degenerate ? "three lines" : "smooth") + ")";
  } else if (!ca.degenerate && ca.moduli && cb.moduli) {
    const double scale =
        std::max({1.0, std::abs(*ca.moduli), std::abs(*cb.moduli)});
    if (std::abs(*ca.moduli - *cb.moduli) > tol.moduli * scale) {
      row.distinguished = true;
      row.reason = "cubic moduli value differs";
    }
  }
  report.rows.push_back(std::move(row));
  detail::settle_verdict(report);
  return report;
}

/// Phase-family comparison by cubic class: build the two family members from
/// their phase triples and compare through the plane-cubic invariants. The
/// Hesse parameters of both sides are recorded in the notes.
inline ComparisonReport corollary1_check(const std::array<double, 3>& etas,
                                         const std::array<double, 3>& etas_prime,
                                         std::uint64_t seed,
                                         const SearchParams& params = {},
                                         const Tolerances& tol = {}) {
  const HermitianOperator left =
      fixtures::phase_family_operator(etas[0], etas[1], etas[2]);
  const HermitianOperator right = fixtures::phase_family_operator(
      etas_prime[0], etas_prime[1], etas_prime[2]);
  ComparisonReport report = hesse_family_check(left, right, seed, params, tol);
  report.check = "corollary1";
  auto note_g = [&](const char* side, const std::array<double, 3>& e) {
    const Complex g = hesse_parameter(e[0], e[1], e[2]);
    std::ostringstream os;
    os << side << " Hesse parameter g = " << detail::format_complex(g);
    report.notes.push_back(os.str());
  };
  note_g("left", etas);
  note_g("right", etas_prime);
  return report;
}

/// Self-test of local-unitary covariance: random local conjugations must
/// produce NO_OBSTRUCTION_DETECTED, and sampled locus points of the
/// conjugated operator must map back into the original locus under the
/// per-party transpose rule.
struct SelftestResult {
  bool passed = true;
  int trials = 0;
  int points_checked = 0;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
};

inline SelftestResult lu_invariance_selftest(const HermitianOperator& h,
                                             int trials, std::uint64_t seed,
                                             const SearchParams& params = {},
                                             const Tolerances& tol = {}) {
  SelftestResult result;
  result.trials = trials;
  const bool bipartite = h.shape().parties() == 2;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = detail::mix_seed(seed, 0x5e1f + t);
    LocalUnitary u = random_local_unitary(h.shape(), trial_seed, tol);
    // single-term mixture == plain conjugation; exercises the mixture path
    HermitianOperator conjugated = lu_mixture(h, {u}, {1.0}, tol);
    ComparisonReport report =
        bipartite
            ? theorem1_check(h, conjugated, trial_seed, params, tol)
            : theorem3_check(h, conjugated, trial_seed, std::nullopt, params, tol);
    if (report.verdict != Verdict::kNoObstructionDetected) {
      result.passed = false;
      result.failures.push_back(
          "trial " + std::to_string(t) + ": verdict " +
          to_string(report.verdict) +
          (report.witness ? " at cut " + report.witness->cut + ", k=" +
                                std::to_string(report.witness->k) + " (" +
                                report.witness->reason + ")"
                          : ""));
      continue;
    }
    // covariance spot check on the first nonempty, non-full locus
    bool checked = false;
    for (const InvariantRow& row : report.rows) {
      if (row.right.empty || row.right.full_space) continue;
      DegeneratingLocus conj_locus = make_locus(conjugated, row.cut, row.k, tol);
      DegeneratingLocus base_locus = make_locus(h, row.cut, row.k, tol);
      std::vector<ProjectivePoint> pts;
      if (row.right.dimension == 0)
        pts = extract_finite_points(conj_locus, params,
                                    detail::mix_seed(trial_seed, 0xab));
      else
        pts = sample_points(conj_locus, 200, params,
                            detail::mix_seed(trial_seed, 0xac));
      for (const ProjectivePoint& p : pts) {
        std::vector<Vector> mapped;
        for (int g = 0; g < conj_locus.pencil().group_count(); ++g) {
          const int party = conj_locus.pencil().group_party[g];
          mapped.push_back(u.factor(party).transpose() * p.tuple(g));
        }
        ProjectivePoint q(std::move(mapped));
        ++result.points_checked;
        if (!member(base_locus, q, tol)) {
          result.passed = false;
          result.failures.push_back("trial " + std::to_string(t) +
                                    ": point " + p.to_string() + " of cut " +
                                    row.label + ", k=" + std::to_string(row.k) +
                                    " does not map into the base locus");
        }
      }
      checked = true;
      break;
    }
    if (!checked)
      result.notes.push_back("trial " + std::to_string(t) +
                             ": no nonempty proper locus to spot-check");
  }
  return result;
}

}  // namespace luob
