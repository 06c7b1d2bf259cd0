#pragma once

#include "luob/simcheck.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace luob {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// digests

/// FNV-1a 64-bit digest of a byte string, rendered as "fnv1a:<16 hex>".
inline std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// operator files (.ham)

/// An operator read from disk (or parsed from text) together with its
/// provenance: the digest of the exact bytes and any loader adjustments.
struct LoadedOperator {
  HermitianOperator op;
  std::string name;                 // empty when the file has no name
  std::string digest;               // digest of the raw input bytes
  std::vector<std::string> notes;   // loader adjustments, e.g. renormalization
};

namespace detail {

inline Complex json_complex(const Json& j, const char* where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ValidationError(std::string(where) +
                          ": expected a [re, im] number pair");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

inline Json complex_json(Complex z) {
  return Json::array({z.real(), z.imag()});
}

}  // namespace detail

/// Parse the JSON operator format. The document carries "dims" plus exactly
/// one of:
///   "generators": [{"weight": w > 0, "amplitudes": [[re, im], ...]}, ...]
///     each amplitude list a unit vector (within 1e-6; renormalized on load,
///     with a note) of length prod(dims); the operator is
///     sum_i w_i |v_i><v_i|;
///   "dense": row-major matrix of [re, im] pairs (list of rows), which must
///     be Hermitian and positive semidefinite.
/// An optional "name" labels the operator in reports. Malformed JSON raises
/// IoError; a well-formed document with invalid contents raises
/// ValidationError.
inline LoadedOperator parse_ham(const std::string& text,
                                const Tolerances& tol = {}) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(std::string("operator file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw ValidationError("operator file: top level must be an object");
  if (!doc.contains("dims"))
    throw ValidationError("operator file: missing \"dims\"");
  std::vector<int> dims;
  for (const Json& d : doc.at("dims")) {
    if (!d.is_number_integer() || d.get<int>() < 1)
      throw ValidationError("operator file: dims must be positive integers");
    dims.push_back(d.get<int>());
  }
  SpaceShape shape(dims);
  const bool has_gen = doc.contains("generators");
  const bool has_dense = doc.contains("dense");
  if (has_gen == has_dense)
    throw ValidationError(
        "operator file: provide exactly one of \"generators\" or \"dense\"");

  std::string name;
  if (doc.contains("name")) {
    if (!doc.at("name").is_string())
      throw ValidationError("operator file: \"name\" must be a string");
    name = doc.at("name").get<std::string>();
  }
  std::vector<std::string> notes;

  const int n = shape.total();
  if (has_gen) {
    const Json& gens = doc.at("generators");
    if (!gens.is_array())
      throw ValidationError("operator file: \"generators\" must be a list");
    std::vector<PureStateVector> states;
    std::vector<double> weights;
    bool renormalized = false;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const Json& g = gens[i];
      const std::string where = "generator " + std::to_string(i);
      if (!g.is_object() || !g.contains("weight") || !g.contains("amplitudes"))
        throw ValidationError(where + ": needs \"weight\" and \"amplitudes\"");
      if (!g.at("weight").is_number())
        throw ValidationError(where + ": weight must be a number");
      const double w = g.at("weight").get<double>();
      if (!(w > 0))
        throw ValidationError(where + ": weight must be positive");
      const Json& amp = g.at("amplitudes");
      if (!amp.is_array() || static_cast<int>(amp.size()) != n)
        throw ValidationError(where + ": amplitudes must list " +
                              std::to_string(n) + " [re, im] pairs");
      Vector v(n);
      for (int j = 0; j < n; ++j)
        v(j) = detail::json_complex(amp[j], where.c_str());
      const double norm = v.norm();
      if (std::abs(norm - 1.0) > 1e-6)
        throw ValidationError(where + ": amplitudes have norm " +
                              std::to_string(norm) +
                              ", more than 1e-6 away from 1");
      if (std::abs(norm - 1.0) > tol.norm) {
        v /= norm;
        renormalized = true;
      }
      states.push_back(PureStateVector(shape, std::move(v)));
      weights.push_back(w);
    }
    if (renormalized)
      notes.push_back(
          "generator amplitudes were renormalized to unit norm on load");
    return LoadedOperator{from_pure_states(shape, states, weights, tol),
                          std::move(name), fnv1a_digest(text),
                          std::move(notes)};
  }

  const Json& dense = doc.at("dense");
  if (!dense.is_array() || static_cast<int>(dense.size()) != n)
    throw ValidationError("operator file: \"dense\" must list " +
                          std::to_string(n) + " rows");
  Matrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const Json& row = dense[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ValidationError("operator file: dense row " + std::to_string(r) +
                            " must list " + std::to_string(n) +
                            " [re, im] pairs");
    for (int c = 0; c < n; ++c)
      m(r, c) = detail::json_complex(row[c], "dense entry");
  }
  HermitianOperator op(shape, std::move(m), tol);
  // semi-positivity is part of the format contract for dense input
  spectral_decompose(op, tol);
  return LoadedOperator{std::move(op), std::move(name), fnv1a_digest(text),
                        std::move(notes)};
}

inline LoadedOperator load_ham(const std::string& path,
                               const Tolerances& tol = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open operator file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof())
    throw IoError("error while reading operator file: " + path);
  return parse_ham(buf.str(), tol);
}

/// Serialize an operator in the dense form of the format. The result parses
/// back to the same operator to full precision.
inline std::string render_ham(const HermitianOperator& op,
                              const std::string& name = "") {
  Json doc;
  if (!name.empty()) doc["name"] = name;
  doc["dims"] = op.shape().dims();
  Json rows = Json::array();
  const Matrix& m = op.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(detail::complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  doc["dense"] = std::move(rows);
  return doc.dump(2) + "\n";
}

/// Serialize an operator in the generator form: weights and unit vectors.
inline std::string render_ham_generators(const SpaceShape& shape,
                                         const std::vector<PureStateVector>& states,
                                         const std::vector<double>& weights,
                                         const std::string& name = "") {
  if (states.size() != weights.size())
    throw ValidationError("render_ham_generators: weight/state count mismatch");
  Json doc;
  if (!name.empty()) doc["name"] = name;
  doc["dims"] = shape.dims();
  Json gens = Json::array();
  for (std::size_t i = 0; i < states.size(); ++i) {
    Json g;
    g["weight"] = weights[i];
    Json amp = Json::array();
    for (Eigen::Index j = 0; j < states[i].amplitudes.size(); ++j)
      amp.push_back(detail::complex_json(states[i].amplitudes(j)));
    g["amplitudes"] = std::move(amp);
    gens.push_back(std::move(g));
  }
  doc["generators"] = std::move(gens);
  return doc.dump(2) + "\n";
}

inline void save_ham(const std::string& path, const HermitianOperator& op,
                     const std::string& name = "") {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw IoError("cannot open file for writing: " + path);
  outf << render_ham(op, name);
  if (!outf.good()) throw IoError("error while writing: " + path);
}

// ---------------------------------------------------------------------------
// variable naming for display

/// Display names for the variables of one pencil group. A pencil on a single
/// party uses r/s/t/... by party; multi-party cuts use a/b/c/... per party so
/// the tuple structure stays visible.
inline std::vector<std::string> group_variable_names(const LinearPencil& pencil,
                                                     int group) {
  static const char* kSingle = "rstuvw";
  const int party = pencil.group_party.at(group);
  std::string stem;
  if (pencil.group_count() == 1 && party >= 0 && party < 6)
    stem = std::string(1, kSingle[party]);
  else if (party >= 0 && party < 26)
    stem = std::string(1, static_cast<char>('a' + party));
  else
    stem = "x" + std::to_string(group) + "_";
  std::vector<std::string> names;
  for (int i = 0; i < pencil.group_dims.at(group); ++i)
    names.push_back(stem + std::to_string(i + 1));
  return names;
}

/// Flat list over all groups, matching the polynomial variable order.
inline std::vector<std::string> variable_names(const LinearPencil& pencil) {
  std::vector<std::string> names;
  for (int g = 0; g < pencil.group_count(); ++g)
    for (std::string& n : group_variable_names(pencil, g))
      names.push_back(std::move(n));
  return names;
}

// ---------------------------------------------------------------------------
// signatures and reports, text and JSON

/// One-line human summary of a signature ("empty", "dim 0, 2 points: ...").
inline std::string signature_summary(const LocusSignature& sig,
                                     const std::vector<std::string>* names =
                                         nullptr) {
  if (sig.full_space) {
    std::ostringstream os;
    os << "full space (dim " << (sig.dimension ? *sig.dimension : 0) << ")";
    return os.str();
  }
  if (sig.empty) return "empty";
  std::ostringstream os;
  os << "dim " << (sig.dimension ? std::to_string(*sig.dimension) : "?");
  if (sig.degree) {
    os << ", degree " << sig.degree->distinct;
    if (sig.degree->weighted != sig.degree->distinct)
      os << " (weighted " << sig.degree->weighted << ")";
  }
  if (sig.points) {
    os << ", " << sig.points->size()
       << (sig.points->size() == 1 ? " point: " : " points: ");
    for (std::size_t i = 0; i < sig.points->size(); ++i) {
      if (i) os << ", ";
      os << (*sig.points)[i].to_string();
      if (sig.point_mults && (*sig.point_mults)[i].second > 1)
        os << "^" << (*sig.point_mults)[i].second;
    }
  }
  if (sig.lines && sig.lines->is_line_union) {
    os << "; union of " << sig.lines->components.size() << " line"
       << (sig.lines->components.size() == 1 ? "" : "s");
    if (names) {
      os << ": ";
      for (std::size_t i = 0; i < sig.lines->components.size(); ++i) {
        if (i) os << ", ";
        os << "{" << sig.lines->components[i].form.to_string(*names) << "}";
        if (sig.lines->components[i].multiplicity > 1)
          os << "^" << sig.lines->components[i].multiplicity;
      }
    }
  }
  if (sig.cubic) {
    os << "; cubic "
       << (sig.cubic->degenerate ? "degenerate (three lines)" : "smooth");
    if (sig.cubic->moduli)
      os << ", moduli " << detail::format_complex(*sig.cubic->moduli);
  }
  return os.str();
}

inline Json signature_to_json(const LocusSignature& sig) {
  Json j;
  Json ambient = Json::array();
  for (int d : sig.ambient_dims) ambient.push_back(d);
  j["ambient_dims"] = std::move(ambient);
  j["k"] = sig.k;
  j["full_space"] = sig.full_space;
  j["empty"] = sig.empty;
  if (sig.dimension) j["dimension"] = *sig.dimension;
  if (sig.degree) {
    j["degree"] = Json{{"distinct", sig.degree->distinct},
                       {"weighted", sig.degree->weighted}};
  }
  if (sig.points) {
    Json pts = Json::array();
    for (const ProjectivePoint& p : *sig.points) pts.push_back(p.to_string());
    j["points"] = std::move(pts);
    if (sig.point_mults) {
      Json mults = Json::array();
      for (const auto& [p, m] : *sig.point_mults) mults.push_back(m);
      j["point_multiplicities"] = std::move(mults);
    }
  }
  if (sig.lines) {
    Json lines;
    lines["is_line_union"] = sig.lines->is_line_union;
    Json comps = Json::array();
    for (const LineComponent& c : sig.lines->components) {
      Json comp;
      Json coeffs = Json::array();
      for (Eigen::Index i = 0; i < c.form.coefficients.size(); ++i)
        coeffs.push_back(detail::complex_json(c.form.coefficients(i)));
      comp["coefficients"] = std::move(coeffs);
      comp["multiplicity"] = c.multiplicity;
      comps.push_back(std::move(comp));
    }
    lines["components"] = std::move(comps);
    j["lines"] = std::move(lines);
  }
  if (sig.cubic) {
    Json cubic;
    cubic["g"] = detail::complex_json(sig.cubic->g);
    cubic["degenerate"] = sig.cubic->degenerate;
    cubic["moduli_pole"] = sig.cubic->moduli_pole;
    if (sig.cubic->moduli) cubic["moduli"] = detail::complex_json(*sig.cubic->moduli);
    j["cubic"] = std::move(cubic);
  }
  j["seed"] = sig.seed;
  return j;
}

inline Json tolerances_to_json(const Tolerances& tol) {
  Json j;
  j["herm"] = tol.herm;
  j["psd"] = tol.psd;
  j["norm"] = tol.norm;
  j["prob"] = tol.prob;
  j["unit"] = tol.unit;
  j["orth"] = tol.orth;
  j["rec"] = tol.rec;
  j["rank"] = tol.rank;
  j["coeff"] = tol.coeff;
  j["member"] = tol.member;
  j["point"] = tol.point;
  j["factor"] = tol.factor;
  j["cubic"] = tol.cubic;
  j["moduli"] = tol.moduli;
  return j;
}

inline std::string tolerances_summary(const Tolerances& tol) {
  std::ostringstream os;
  char buf[32];
  auto item = [&](const char* name, double v) {
    std::snprintf(buf, sizeof(buf), "%g", v);
    os << name << "=" << buf << " ";
  };
  item("herm", tol.herm);
  item("psd", tol.psd);
  item("norm", tol.norm);
  item("prob", tol.prob);
  item("unit", tol.unit);
  item("orth", tol.orth);
  item("rec", tol.rec);
  item("rank", tol.rank);
  item("coeff", tol.coeff);
  item("member", tol.member);
  item("point", tol.point);
  item("factor", tol.factor);
  item("cubic", tol.cubic);
  std::snprintf(buf, sizeof(buf), "%g", tol.moduli);
  os << "moduli=" << buf;
  return os.str();
}

/// Provenance of one report input: a CLI label ("left"/"right"), the source
/// string ("fixture:example4" or a file path) and the content digest.
struct InputRecord {
  std::string label;
  std::string source;
  std::string digest;
};

/// Everything a run writes down: what was asked, of which inputs, with which
/// seed and tolerances, and what came out. Rendering the same document twice
/// produces identical bytes.
struct ReportDocument {
  std::string command;
  std::vector<InputRecord> inputs;
  Tolerances tol;
  ComparisonReport report;
};

inline Json report_to_json(const ReportDocument& doc) {
  Json j;
  j["tool"] = Json{{"name", "luob"}, {"version", kVersion}};
  j["command"] = doc.command;
  j["seed"] = doc.report.seed;
  Json inputs = Json::array();
  for (const InputRecord& rec : doc.inputs)
    inputs.push_back(Json{{"label", rec.label},
                          {"source", rec.source},
                          {"digest", rec.digest}});
  j["inputs"] = std::move(inputs);
  j["tolerances"] = tolerances_to_json(doc.tol);
  j["check"] = doc.report.check;
  j["rank_left"] = doc.report.rank_left;
  j["rank_right"] = doc.report.rank_right;
  j["trace_match"] = doc.report.trace_match;
  Json rows = Json::array();
  for (const InvariantRow& row : doc.report.rows) {
    Json r;
    r["cut"] = row.label;
    r["k"] = row.k;
    r["left"] = signature_to_json(row.left);
    r["right"] = signature_to_json(row.right);
    r["distinguished"] = row.distinguished;
    if (row.distinguished) r["reason"] = row.reason;
    rows.push_back(std::move(r));
  }
  j["invariants"] = std::move(rows);
  j["verdict"] = to_string(doc.report.verdict);
  if (doc.report.witness) {
    j["witness"] = Json{{"cut", doc.report.witness->cut},
                        {"k", doc.report.witness->k},
                        {"reason", doc.report.witness->reason}};
  }
  Json notes = Json::array();
  for (const std::string& n : doc.report.notes) notes.push_back(n);
  j["notes"] = std::move(notes);
  return j;
}

inline std::string render_report_text(const ReportDocument& doc) {
  std::ostringstream os;
  os << "luob " << kVersion << "\n";
  os << "command:     " << doc.command << "\n";
  os << "seed:        " << doc.report.seed << "\n";
  os << "inputs:\n";
  for (const InputRecord& rec : doc.inputs)
    os << "  " << rec.label << ": " << rec.source << "  (" << rec.digest
       << ")\n";
  os << "check:       " << doc.report.check << "\n";
  os << "ranks:       " << doc.report.rank_left << " / "
     << doc.report.rank_right << "   traces match: "
     << (doc.report.trace_match ? "yes" : "no") << "\n";
  if (!doc.report.rows.empty()) {
    os << "invariants:\n";
    std::size_t cut_w = 3, k_w = 1, left_w = 4, right_w = 5;
    std::vector<std::array<std::string, 4>> cells;
    for (const InvariantRow& row : doc.report.rows) {
      std::array<std::string, 4> cell = {row.label, std::to_string(row.k),
                                         signature_summary(row.left),
                                         signature_summary(row.right)};
      cut_w = std::max(cut_w, cell[0].size());
      k_w = std::max(k_w, cell[1].size());
      left_w = std::max(left_w, cell[2].size());
      right_w = std::max(right_w, cell[3].size());
      cells.push_back(std::move(cell));
    }
    auto pad = [](const std::string& s, std::size_t w) {
      return s + std::string(w - s.size(), ' ');
    };
    os << "  " << pad("cut", cut_w) << "  " << pad("k", k_w) << "  "
       << pad("left", left_w) << "  " << pad("right", right_w)
       << "  differs\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const InvariantRow& row = doc.report.rows[i];
      os << "  " << pad(cells[i][0], cut_w) << "  " << pad(cells[i][1], k_w)
         << "  " << pad(cells[i][2], left_w) << "  " << pad(cells[i][3], right_w)
         << "  " << (row.distinguished ? "yes: " + row.reason : "-") << "\n";
    }
  }
  os << "verdict:     " << to_string(doc.report.verdict) << "\n";
  if (doc.report.witness)
    os << "witness:     cut " << doc.report.witness->cut << ", k="
       << doc.report.witness->k << " - " << doc.report.witness->reason << "\n";
  if (!doc.report.notes.empty()) {
    os << "notes:\n";
    for (const std::string& n : doc.report.notes) os << "  - " << n << "\n";
  }
  os << "tolerances:  " << tolerances_summary(doc.tol) << "\n";
  return os.str();
}

/// Signature table for one or two operators over a list of (cut, k) slots —
/// the output of the `invariants` command.
struct SignatureEntry {
  std::string cut;
  int k = 0;
  LocusSignature sig;
};

struct InvariantsDocument {
  std::string command;
  std::vector<InputRecord> inputs;
  Tolerances tol;
  std::uint64_t seed = 0;
  // one block of entries per operator, aligned with `inputs`
  std::vector<std::vector<SignatureEntry>> tables;
};

inline Json invariants_to_json(const InvariantsDocument& doc) {
  Json j;
  j["tool"] = Json{{"name", "luob"}, {"version", kVersion}};
  j["command"] = doc.command;
  j["seed"] = doc.seed;
  Json inputs = Json::array();
  for (const InputRecord& rec : doc.inputs)
    inputs.push_back(Json{{"label", rec.label},
                          {"source", rec.source},
                          {"digest", rec.digest}});
  j["inputs"] = std::move(inputs);
  j["tolerances"] = tolerances_to_json(doc.tol);
  Json tables = Json::array();
  for (std::size_t t = 0; t < doc.tables.size(); ++t) {
    Json table;
    table["operator"] = t < doc.inputs.size() ? doc.inputs[t].label
                                              : "operator " + std::to_string(t);
    Json entries = Json::array();
    for (const SignatureEntry& e : doc.tables[t]) {
      Json row;
      row["cut"] = e.cut;
      row["k"] = e.k;
      row["signature"] = signature_to_json(e.sig);
      entries.push_back(std::move(row));
    }
    table["entries"] = std::move(entries);
    tables.push_back(std::move(table));
  }
  j["invariants"] = std::move(tables);
  return j;
}

inline std::string render_invariants_text(const InvariantsDocument& doc) {
  std::ostringstream os;
  os << "luob " << kVersion << "\n";
  os << "command:     " << doc.command << "\n";
  os << "seed:        " << doc.seed << "\n";
  os << "inputs:\n";
  for (const InputRecord& rec : doc.inputs)
    os << "  " << rec.label << ": " << rec.source << "  (" << rec.digest
       << ")\n";
  for (std::size_t t = 0; t < doc.tables.size(); ++t) {
    os << "invariants of "
       << (t < doc.inputs.size() ? doc.inputs[t].label
                                 : "operator " + std::to_string(t))
       << ":\n";
    std::size_t cut_w = 3, k_w = 1;
    for (const SignatureEntry& e : doc.tables[t]) {
      cut_w = std::max(cut_w, e.cut.size());
      k_w = std::max(k_w, std::to_string(e.k).size());
    }
    auto pad = [](const std::string& s, std::size_t w) {
      return s + std::string(w - s.size(), ' ');
    };
    os << "  " << pad("cut", cut_w) << "  " << pad("k", k_w) << "  locus\n";
    for (const SignatureEntry& e : doc.tables[t])
      os << "  " << pad(e.cut, cut_w) << "  "
         << pad(std::to_string(e.k), k_w) << "  " << signature_summary(e.sig)
         << "\n";
  }
  os << "tolerances:  " << tolerances_summary(doc.tol) << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// plot data (CSV)

/// CSV of locus points in affine chart coordinates: each group is charted on
/// its last coordinate, columns re/im of v_i/v_n for i < n. Points too close
/// to a chart's hyperplane at infinity are skipped, so the file may hold
/// slightly fewer rows than points were sampled.
inline std::string plot_csv(const LinearPencil& pencil,
                            const std::vector<ProjectivePoint>& points) {
  std::ostringstream os;
  bool first_col = true;
  for (int g = 0; g < pencil.group_count(); ++g) {
    const std::vector<std::string> names = group_variable_names(pencil, g);
    const int n = pencil.group_dims[g];
    for (int i = 0; i + 1 < n; ++i) {
      if (!first_col) os << ",";
      first_col = false;
      os << "re(" << names[i] << "/" << names[n - 1] << ")," << "im("
         << names[i] << "/" << names[n - 1] << ")";
    }
  }
  os << "\n";
  char buf[64];
  for (const ProjectivePoint& p : points) {
    bool chartable = true;
    for (int g = 0; g < pencil.group_count(); ++g) {
      const Vector& v = p.tuple(g);
      const double top = v.cwiseAbs().maxCoeff();
      if (std::abs(v(v.size() - 1)) < 1e-6 * top) chartable = false;
    }
    if (!chartable) continue;
    bool first = true;
    for (int g = 0; g < pencil.group_count(); ++g) {
      const Vector& v = p.tuple(g);
      const Complex last = v(v.size() - 1);
      for (Eigen::Index i = 0; i + 1 < v.size(); ++i) {
        const Complex z = v(i) / last;
        std::snprintf(buf, sizeof(buf), "%.17g", z.real());
        os << (first ? "" : ",") << buf;
        first = false;
        std::snprintf(buf, sizeof(buf), "%.17g", z.imag());
        os << "," << buf;
      }
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace luob
