#pragma once

#include "luob/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace luob {
namespace cli {

// Exit codes of the tool:
//   0  success / no obstruction detected
//   1  selftest failure or unexpected internal error
//   2  validation problem (bad arguments, malformed operator contents)
//   3  file problem (missing or unreadable input, bad JSON)
//  10  comparison verdict OBSTRUCTION
//  11  comparison verdict PRECONDITION_FAILED
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitObstruction = 10;
inline constexpr int kExitPrecondition = 11;

inline int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::kNoObstructionDetected: return kExitOk;
    case Verdict::kObstruction: return kExitObstruction;
    case Verdict::kPreconditionFailed: return kExitPrecondition;
  }
  return kExitFailure;
}

/// --seed beats the LUOB_SEED environment variable beats 0.
inline std::uint64_t resolve_seed(bool seed_given, std::uint64_t seed_flag) {
  if (seed_given) return seed_flag;
  if (const char* env = std::getenv("LUOB_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size())
        throw ValidationError("LUOB_SEED is not an integer: '" +
                              std::string(env) + "'");
      return static_cast<std::uint64_t>(v);
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception&) {
      throw ValidationError("LUOB_SEED is not an integer: '" +
                            std::string(env) + "'");
    }
  }
  return 0;
}

/// Parse a cut such as "A", "B", "A:B", or "AB" into party indices.
inline std::vector<int> parse_cut(const std::string& text,
                                  const SpaceShape& shape) {
  std::vector<int> cut;
  std::vector<bool> seen(shape.parties(), false);
  for (char c : text) {
    if (c == ':' || c == ',') continue;
    int p = -1;
    if (c >= 'A' && c <= 'Z') p = c - 'A';
    if (c >= 'a' && c <= 'z') p = c - 'a';
    if (p < 0 || p >= shape.parties())
      throw ValidationError("cut '" + text + "' names party '" +
                            std::string(1, c) + "' outside the " +
                            shape.to_string() + " space");
    if (seen[p])
      throw ValidationError("cut '" + text + "' repeats a party");
    seen[p] = true;
    cut.push_back(p);
  }
  if (cut.empty()) throw ValidationError("cut '" + text + "' names no party");
  if (static_cast<int>(cut.size()) == shape.parties())
    throw ValidationError("cut '" + text + "' must leave at least one party out");
  std::sort(cut.begin(), cut.end());
  return cut;
}

inline Tolerances apply_tol_overrides(Tolerances tol,
                                      const std::vector<std::string>& overrides) {
  static const std::map<std::string, double Tolerances::*> fields = {
      {"herm", &Tolerances::herm},     {"unit", &Tolerances::unit},
      {"orth", &Tolerances::orth},     {"norm", &Tolerances::norm},
      {"prob", &Tolerances::prob},     {"rec", &Tolerances::rec},
      {"psd", &Tolerances::psd},       {"rank", &Tolerances::rank},
      {"coeff", &Tolerances::coeff},   {"member", &Tolerances::member},
      {"point", &Tolerances::point},   {"factor", &Tolerances::factor},
      {"cubic", &Tolerances::cubic},   {"moduli", &Tolerances::moduli}};
  for (const std::string& item : overrides) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw ValidationError("tolerance override '" + item +
                            "' is not of the form name=value");
    const std::string name = item.substr(0, eq);
    auto it = fields.find(name);
    if (it == fields.end())
      throw ValidationError("unknown tolerance '" + name + "'");
    try {
      std::size_t used = 0;
      const double v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1 || !(v >= 0))
        throw std::invalid_argument(item);
      tol.*(it->second) = v;
    } catch (const std::exception&) {
      throw ValidationError("tolerance override '" + item +
                            "' has no non-negative numeric value");
    }
  }
  return tol;
}

/// One resolved operand: the operator(s), its provenance record, and any
/// notes the loader or fixture catalog wants surfaced in reports.
struct ResolvedInput {
  HermitianOperator op;
  std::optional<HermitianOperator> second;  // pair fixtures only
  InputRecord record;
  std::vector<std::string> notes;
};

inline ResolvedInput resolve_input(const std::string& fixture,
                                   const std::string& input,
                                   const std::string& label,
                                   const Tolerances& tol) {
  if (fixture.empty() == input.empty())
    throw ValidationError("give exactly one of --fixture/--input for the " +
                          label + " operand");
  if (!fixture.empty()) {
    auto [op, second] = fixtures::resolve_fixture(fixture);
    const std::string source = "fixture:" + fixture;
    ResolvedInput r{std::move(op), std::move(second),
                    InputRecord{label, source, fnv1a_digest(source)},
                    fixtures::advisories(fixture)};
    return r;
  }
  LoadedOperator loaded = load_ham(input, tol);
  std::string source = input;
  if (!loaded.name.empty()) source += " (" + loaded.name + ")";
  return ResolvedInput{std::move(loaded.op), std::nullopt,
                       InputRecord{label, source, loaded.digest},
                       std::move(loaded.notes)};
}

/// Resolve the two operands of a comparison. A single pair fixture supplies
/// both; otherwise both slots must be given explicitly.
inline std::pair<ResolvedInput, ResolvedInput> resolve_pair(
    const std::string& fixture, const std::string& fixture2,
    const std::string& input, const std::string& input2,
    const Tolerances& tol) {
  const bool second_given = !fixture2.empty() || !input2.empty();
  if (!second_given) {
    ResolvedInput left = resolve_input(fixture, input, "left", tol);
    if (!left.second)
      throw ValidationError(
          "the comparison needs two operands: a pair fixture, or a second "
          "one via --fixture2/--input2");
    ResolvedInput right{std::move(*left.second), std::nullopt,
                        InputRecord{"right", left.record.source + ":prime",
                                    fnv1a_digest(left.record.source + ":prime")},
                        {}};
    left.second.reset();
    return {std::move(left), std::move(right)};
  }
  ResolvedInput left = resolve_input(fixture, input, "left", tol);
  if (left.second)
    throw ValidationError(
        "the first operand is already a pair; drop --fixture2/--input2 or "
        "pick one element (e.g. ':prime')");
  ResolvedInput right = resolve_input(fixture2, input2, "right", tol);
  if (right.second)
    throw ValidationError("the second operand must be a single operator");
  return {std::move(left), std::move(right)};
}

inline void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + output_path);
  out << text;
  if (!out.good()) throw IoError("error while writing: " + output_path);
}

inline std::string joined_command(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += " ";
    s += argv[i];
  }
  return s;
}

}  // namespace cli

/// Entry point of the `luob` tool; returns the process exit code.
inline int run_cli(int argc, char** argv) {
  using namespace cli;

  CLI::App app{
      "luob - degenerating-locus invariants of semi-positive operators and\n"
      "obstructions to simulation under local unitary mixing"};
  app.require_subcommand(1);

  struct Opts {
    std::string fixture, fixture2, input, input2;
    std::string cut_text, side;
    std::vector<std::string> cuts_text;
    std::vector<std::string> tol_overrides;
    std::string format = "text";
    std::string output;
    std::uint64_t seed = 0;
    int k = -1;
    int count = 200;
    int trials = 10;
    int theorem = 0;  // 0 = auto
  } o;

  auto add_common = [&](CLI::App* sub, bool pair) {
    sub->add_option("--fixture", o.fixture,
                    "built-in fixture id, e.g. example1:0,0,3.14");
    sub->add_option("--input", o.input, "operator file (.ham)");
    if (pair) {
      sub->add_option("--fixture2", o.fixture2, "second fixture id");
      sub->add_option("--input2", o.input2, "second operator file");
    }
    sub->add_option("--seed", o.seed,
                    "random seed (default: LUOB_SEED env or 0)");
    sub->add_option("--tol", o.tol_overrides,
                    "tolerance override name=value (repeatable)");
    sub->add_option("--format", o.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--output", o.output, "write to this file instead of stdout");
  };

  CLI::App* inv = app.add_subcommand(
      "invariants", "locus signatures of one operator (or a fixture pair)");
  add_common(inv, false);
  inv->add_option("--cut", o.cut_text, "cut, e.g. A or A:B (default: each single party)");
  inv->add_option("--side", o.side, "shorthand for --cut on bipartite spaces: A or B");
  inv->add_option("--k", o.k, "single rank bound (default: all of 0..rows-1)");

  CLI::App* cmp = app.add_subcommand(
      "compare", "run an obstruction check on a pair of operators");
  add_common(cmp, true);
  cmp->add_option("--theorem", o.theorem, "which check: 1, 2 or 3 (default: by party count)")
      ->check(CLI::IsMember({1, 2, 3}));
  cmp->add_option("--cut", o.cuts_text, "cut list for the multipartite check (repeatable)");

  CLI::App* swp = app.add_subcommand(
      "swapcheck", "compare an operator against its own tensor flip");
  add_common(swp, false);

  CLI::App* th2 = app.add_subcommand(
      "theorem2", "maximal-Schmidt-rank obstruction check on a pair");
  add_common(th2, true);

  CLI::App* th3 = app.add_subcommand(
      "theorem3", "multipartite obstruction check on a pair");
  add_common(th3, true);
  th3->add_option("--cut", o.cuts_text, "cut list (repeatable, default: all proper cuts)");

  CLI::App* slf = app.add_subcommand(
      "selftest", "local-unitary covariance self-test on one operator");
  add_common(slf, false);
  slf->add_option("--trials", o.trials, "number of random conjugations")
      ->check(CLI::PositiveNumber);

  CLI::App* exs = app.add_subcommand("examples", "list the built-in fixtures");

  CLI::App* plt = app.add_subcommand(
      "plotdata", "CSV of locus points in affine chart coordinates");
  add_common(plt, false);
  plt->add_option("--cut", o.cut_text, "cut (default: A)");
  plt->add_option("--side", o.side, "shorthand for --cut: A or B");
  plt->add_option("--k", o.k, "rank bound")->required();
  plt->add_option("--count", o.count, "points to sample (default 200)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    const Tolerances tol = apply_tol_overrides({}, o.tol_overrides);
    bool seed_given = false;
    for (CLI::App* sub : app.get_subcommands())
      if (CLI::Option* opt = sub->get_option_no_throw("--seed"))
        seed_given = seed_given || opt->count() > 0;
    const std::uint64_t seed = resolve_seed(seed_given, o.seed);
    const SearchParams params;
    const std::string command = joined_command(argc, argv);

    auto pick_cut_text = [&]() -> std::string {
      if (!o.side.empty() && !o.cut_text.empty())
        throw ValidationError("give --cut or --side, not both");
      return o.side.empty() ? o.cut_text : o.side;
    };

    if (exs->parsed()) {
      std::ostringstream os;
      os << "built-in fixtures:\n";
      for (const fixtures::FixtureEntry& e : fixtures::catalog())
        os << "  " << e.id << "\n      " << e.summary << "\n";
      emit(os.str(), o.output);
      return kExitOk;
    }

    if (inv->parsed()) {
      ResolvedInput in = resolve_input(o.fixture, o.input, "H", tol);
      const SpaceShape& shape = in.op.shape();
      std::vector<std::vector<int>> cuts;
      const std::string cut_text = pick_cut_text();
      if (!cut_text.empty()) {
        cuts.push_back(parse_cut(cut_text, shape));
      } else {
        for (int p = 0; p < shape.parties(); ++p) cuts.push_back({p});
      }
      InvariantsDocument doc;
      doc.command = command;
      doc.tol = tol;
      doc.seed = seed;
      doc.inputs.push_back(in.record);
      std::vector<const HermitianOperator*> ops = {&in.op};
      if (in.second) {
        ops.push_back(&*in.second);
        InputRecord rec{"H'", in.record.source + ":prime",
                        fnv1a_digest(in.record.source + ":prime")};
        doc.inputs.push_back(std::move(rec));
      }
      std::uint64_t slot = 0;
      for (const HermitianOperator* op : ops) {
        std::vector<SignatureEntry> table;
        for (const std::vector<int>& cut : cuts) {
          const int rows = detail::complement_dim(shape, cut);
          const int k_lo = o.k >= 0 ? o.k : 0;
          const int k_hi = o.k >= 0 ? o.k + 1 : rows;
          for (int k = k_lo; k < k_hi; ++k) {
            DegeneratingLocus locus = make_locus(*op, cut, k, tol);
            LocusSignature sig =
                signature(locus, detail::mix_seed(seed, 0x1a0 + slot++), params);
            table.push_back(SignatureEntry{cut_label(cut), k, std::move(sig)});
          }
        }
        doc.tables.push_back(std::move(table));
      }
      emit(o.format == "json" ? invariants_to_json(doc).dump(2) + "\n"
                              : render_invariants_text(doc),
           o.output);
      return kExitOk;
    }

    if (cmp->parsed() || th2->parsed() || th3->parsed()) {
      auto [left, right] =
          resolve_pair(o.fixture, o.fixture2, o.input, o.input2, tol);
      if (left.op.shape() != right.op.shape())
        throw ValidationError("the two operators live on different spaces (" +
                              left.op.shape().to_string() + " vs " +
                              right.op.shape().to_string() + ")");
      int theorem = o.theorem;
      if (th2->parsed()) theorem = 2;
      if (th3->parsed()) theorem = 3;
      if (theorem == 0) theorem = left.op.shape().parties() > 2 ? 3 : 1;
      std::optional<std::vector<std::vector<int>>> cuts;
      if (!o.cuts_text.empty()) {
        if (theorem != 3)
          throw ValidationError("--cut lists apply to the multipartite check only");
        cuts.emplace();
        for (const std::string& c : o.cuts_text)
          cuts->push_back(parse_cut(c, left.op.shape()));
      }
      ComparisonReport report;
      switch (theorem) {
        case 1:
          report = theorem1_check(left.op, right.op, seed, params, tol);
          break;
        case 2:
          report = theorem2_check(left.op, right.op, seed, params, tol);
          break;
        default:
          report = theorem3_check(left.op, right.op, seed, cuts, params, tol);
          break;
      }
      for (const std::string& n : right.notes) report.notes.insert(report.notes.begin(), n);
      for (const std::string& n : left.notes) report.notes.insert(report.notes.begin(), n);
      ReportDocument doc{command, {left.record, right.record}, tol,
                         std::move(report)};
      emit(o.format == "json" ? report_to_json(doc).dump(2) + "\n"
                              : render_report_text(doc),
           o.output);
      return verdict_exit(doc.report.verdict);
    }

    if (swp->parsed()) {
      ResolvedInput in = resolve_input(o.fixture, o.input, "H", tol);
      if (in.second)
        throw ValidationError("swapcheck takes a single operator, not a pair");
      ComparisonReport report = corollary2_swap_check(in.op, seed, params, tol);
      for (const std::string& n : in.notes)
        report.notes.insert(report.notes.begin(), n);
      ReportDocument doc{command, {in.record}, tol, std::move(report)};
      emit(o.format == "json" ? report_to_json(doc).dump(2) + "\n"
                              : render_report_text(doc),
           o.output);
      return verdict_exit(doc.report.verdict);
    }

    if (slf->parsed()) {
      ResolvedInput in = resolve_input(o.fixture, o.input, "H", tol);
      if (in.second)
        throw ValidationError("selftest takes a single operator; pick one "
                              "element of the pair (e.g. ':prime')");
      SelftestResult res =
          lu_invariance_selftest(in.op, o.trials, seed, params, tol);
      std::ostringstream os;
      os << "selftest: " << in.record.source << "  (" << in.record.digest
         << ")\n";
      os << "trials: " << res.trials
         << "   points checked: " << res.points_checked << "\n";
      for (const std::string& n : res.notes) os << "note: " << n << "\n";
      for (const std::string& f : res.failures) os << "failure: " << f << "\n";
      os << "result: " << (res.passed ? "PASS" : "FAIL") << "\n";
      emit(os.str(), o.output);
      return res.passed ? kExitOk : kExitFailure;
    }

    if (plt->parsed()) {
      ResolvedInput in = resolve_input(o.fixture, o.input, "H", tol);
      const SpaceShape& shape = in.op.shape();
      const std::string cut_text = pick_cut_text();
      const std::vector<int> cut =
          cut_text.empty() ? std::vector<int>{0} : parse_cut(cut_text, shape);
      DegeneratingLocus locus = make_locus(in.op, cut, o.k, tol);
      std::vector<ProjectivePoint> pts =
          sample_points(locus, o.count, params, seed);
      emit(plot_csv(locus.pencil(), pts), o.output);
      return kExitOk;
    }

    throw ValidationError("no subcommand selected");
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace luob
