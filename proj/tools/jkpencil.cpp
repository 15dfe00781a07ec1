// Command-line front end. Exit codes: 0 success, 1 malformed input,
// 2 precondition violation, 3 internal failure (including a failed check).

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "jkpencil/acceptance.hpp"
#include "jkpencil/error.hpp"
#include "jkpencil/generators.hpp"
#include "jkpencil/serialize.hpp"
#include "jkpencil/turiel.hpp"

using namespace jkp;

namespace {

struct Output {
  bool json = false;
  std::string path;

  void emit(const Json& j, const std::string& text) const {
    const std::string body = json ? j.dump() + "\n" : text;
    if (path.empty()) {
      std::cout << body;
      return;
    }
    std::ofstream f(path);
    if (!f) throw_malformed("OutputPath", "cannot write " + path);
    f << body;
  }
};

// Raised when a computed check fails; maps to exit code 3 after the
// report has been written.
struct CheckFailed {};

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw_malformed("InputFile", "cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw_malformed("BadJson", path + ": " + e.what());
  }
}

Json tuple_json(const HeightTuple& t) { return Json(t); }

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

// ---------------------------------------------------------------------------

int run_decompose(const Output& out, const std::string& file, bool real, bool no_basis) {
  const SkewPencil p = pencil_from_json(read_json_file(file));
  Json r = jk_report(p, real ? ReportMode::Real : ReportMode::Complex, !no_basis);
  out.emit(r, jk_report_text(r));
  if (r.contains("verified") && !r["verified"].get<bool>()) throw CheckFailed{};
  return 0;
}

int run_subspaces(const Output& out, const std::string& heights, const std::string& mults, bool count_only,
                  bool check, bool violating, std::size_t trials, std::uint64_t seed) {
  HeightProfile h;
  h.heights = parse_size_list(heights, "--heights");
  h.mults = mults.empty() ? std::vector<std::size_t>(h.heights.size(), 1) : parse_size_list(mults, "--mults");
  h.validate();
  const auto count = invariant_subspace_count(h);
  Json j;
  j["heights"] = h.heights;
  j["mults"] = h.mults;
  j["count"] = count;
  std::ostringstream text;
  if (count_only) {
    out.emit(j, std::to_string(count) + "\n");
    return 0;
  }
  const auto tuples = enumerate_invariant_subspaces(h);
  if (tuples.size() != count) throw_internal("CountMismatch", "count formula differs from the enumeration");
  const auto blocks = profile_blocks(h);
  const SkewPencil can = canonical_pencil(blocks);
  const JKDecomposition d{jk_invariants(can), QMatrix::identity(can.n())};
  std::optional<InvarianceOracle> oracle;
  if (check || violating) oracle.emplace(blocks, trials, seed);

  bool failed = false;
  text << "count " << count << "\n";
  text << pad("tuple", 14) << pad("dimension", 11) << (check ? "oracle" : "") << "\n";
  Json rows = Json::array();
  for (const auto& t : tuples) {
    const Subspace W = subspace_from_tuple(d, t);
    Json row{{"tuple", tuple_json(t)}, {"dimension", W.dim()}};
    text << pad(join_sizes(t), 14) << pad(std::to_string(W.dim()), 11);
    if (check) {
      const bool ok = oracle->check(W).invariant;
      failed = failed || !ok;
      row["invariant_consistent"] = ok;
      text << (ok ? "invariant-consistent" : "REJECTED");
    }
    text << "\n";
    rows.push_back(row);
  }
  j["tuples"] = rows;
  if (violating) {
    Json bad = Json::array();
    text << "violating tuples\n";
    for (const auto& t : violating_tuples(h)) {
      const auto v = oracle->check(height_sum_subspace(blocks, t));
      Json row{{"tuple", tuple_json(t)}, {"refuted", !v.invariant}};
      text << "  " << pad(join_sizes(t), 12);
      if (v.witness) {
        row["witness_trial"] = v.witness_trial;
        row["witness"] = matrix_to_json(*v.witness);
        text << "refuted by automorphism from trial " << v.witness_trial << "\n";
      } else {
        text << (v.invariant ? "NOT refuted\n" : v.reason + "\n");
      }
      failed = failed || v.invariant;
      bad.push_back(row);
    }
    j["violating"] = bad;
  }
  if (check || violating) {
    j["trials"] = trials;
    j["seed"] = seed;
  }
  out.emit(j, text.str());
  if (failed) throw CheckFailed{};
  return 0;
}

Json compat_json(const CompatibilityReport& c) {
  return {{"nondegenerate0", c.nondegenerate0},
          {"closed0", c.closed0},
          {"closed1", c.closed1},
          {"nijenhuis_zero", c.nijenhuis_zero}};
}

int run_turiel(const Output& out, const std::string& sig_text, const std::string& which, bool show) {
  const TurielSignature s = TurielSignature::parse(sig_text);
  Json j;
  j["signature"] = s.k;
  j["dimension"] = s.dimension();
  j["jordan_sizes"] = s.jordan_sizes();
  std::ostringstream text;
  text << "signature " << s.to_string() << ", dimension " << s.dimension() << ", Jordan sizes "
       << join_sizes(s.jordan_sizes()) << "\n";
  bool passed = true;
  auto line = [&](const std::string& name, bool ok) {
    text << "  " << pad(name, 24) << (ok ? "ok" : "FAILED") << "\n";
    passed = passed && ok;
  };
  if (which == "forms" || which == "all") {
    const auto f = forms_check(s);
    j["forms"] = compat_json(f.compatibility);
    j["forms"]["endomorphism_matches"] = f.endomorphism_matches;
    j["forms"]["nil_recurrences"] = f.nil_recurrences;
    line("omega0 nondegenerate", f.compatibility.nondegenerate0);
    line("d omega0 = 0", f.compatibility.closed0);
    line("d omega1 = 0", f.compatibility.closed1);
    line("N_P = 0", f.compatibility.nijenhuis_zero);
    line("endomorphism field", f.endomorphism_matches);
    line("nilpotent recurrences", f.nil_recurrences);
  }
  if (which == "frames" || which == "all") {
    const auto f = frame_check(s);
    j["frames"] = {{"gram0", f.gram0}, {"gram1", f.gram1}, {"recurrences", f.recurrences}, {"gamma1_zero", f.gamma1_zero}};
    line("omega0 Gram canonical", f.gram0);
    line("omega1 Gram canonical", f.gram1);
    line("frame recurrences", f.recurrences);
    line("gamma_1 = 0", f.gamma1_zero);
  }
  if (show) {
    const auto b = build_normal_form(s);
    j["chart"] = b.chart.variables();
    j["omega0"] = b.omega0.to_string();
    j["omega1"] = b.omega1.to_string();
    text << "omega0 = " << b.omega0.to_string() << "\n";
    text << "omega1 = " << b.omega1.to_string() << "\n";
  }
  j["passed"] = passed;
  out.emit(j, text.str());
  if (!passed) throw CheckFailed{};
  return 0;
}

// "1,0", "ker:K", "im:L" or "ker:K,im:L".
HeightTuple parse_tuple_arg(const TurielSignature& s, const std::string& text) {
  if (text.rfind("ker:", 0) != 0 && text.rfind("im:", 0) != 0) return parse_size_list(text, "--tuple");
  std::size_t k = s.dimension(), l = 0;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto colon = part.find(':');
    const std::string key = part.substr(0, colon);
    if (colon == std::string::npos || (key != "ker" && key != "im")) {
      throw_malformed("BadTuple", "--tuple: expected ker:K, im:L or a comma list, got \"" + text + "\"");
    }
    const auto v = parse_size_list(part.substr(colon + 1), "--tuple " + key);
    if (v.size() != 1) throw_malformed("BadTuple", "--tuple: one exponent per ker/im part");
    (key == "ker" ? k : l) = v[0];
  }
  return ker_im_tuple(s, k, l);
}

Json verdict_json(const IntegrabilityReport& r) {
  Json j{{"tuple", tuple_json(r.tuple)},
         {"dimension", r.dimension},
         {"predicted", r.predicted ? "integrable" : "non-integrable"},
         {"computed", r.computed ? "integrable" : "non-integrable"},
         {"agrees", r.agrees()}};
  if (r.witness) {
    j["witness"] = {{"block", *r.witness_block}, {"bracket", r.witness->to_string()}, {"matches", r.witness_matches}};
  } else {
    j["witness"] = nullptr;
  }
  if (r.checker_witness) {
    j["failing_pair"] = {{"i", r.checker_witness->i},
                         {"j", r.checker_witness->j},
                         {"bracket", r.checker_witness->bracket.to_string()}};
  }
  return j;
}

int run_distribution(const Output& out, const std::string& sig_text, const std::string& tuple_text, bool all,
                     bool show_generators) {
  const TurielSignature s = TurielSignature::parse(sig_text);
  std::vector<HeightTuple> tuples;
  if (all) {
    tuples = enumerate_invariant_subspaces(s.profile());
  } else {
    if (tuple_text.empty()) throw_malformed("MissingTuple", "--tuple or --all is required");
    tuples.push_back(parse_tuple_arg(s, tuple_text));
  }
  std::vector<IntegrabilityReport> reports(tuples.size());
  for (std::size_t i = 0; i < tuples.size(); ++i) reports[i] = integrability_verdict(s, tuples[i]);

  Json rows = Json::array();
  std::ostringstream text;
  text << pad("tuple", 10) << pad("dimension", 11) << pad("predicted", 16) << pad("computed", 16) << "witness\n";
  bool agree = true;
  for (const auto& r : reports) {
    Json row = verdict_json(r);
    Json gens = Json::array();
    for (const auto& X : invariant_distribution(s, r.tuple)) gens.push_back(X.to_string());
    row["generators"] = gens;
    rows.push_back(row);
    agree = agree && r.agrees();
    text << pad(join_sizes(r.tuple), 10) << pad(std::to_string(r.dimension), 11)
         << pad(r.predicted ? "integrable" : "non-integrable", 16) << pad(r.computed ? "integrable" : "non-integrable", 16);
    if (r.witness) {
      text << "[u_" << *r.witness_block << ", v_" << *r.witness_block << "] = " << r.witness->to_string()
           << (r.witness_matches ? "" : "  (MISMATCH)");
    } else if (r.checker_witness) {
      text << "pair (" << r.checker_witness->i << "," << r.checker_witness->j << ")";
    }
    if (!r.agrees()) text << "  DISAGREES";
    text << "\n";
    if (show_generators)
      for (const auto& g : rows.back()["generators"]) text << "    " << g.get<std::string>() << "\n";
  }
  Json j{{"signature", s.k}, {"rows", rows}, {"agree", agree}};
  out.emit(j, text.str());
  if (!agree) throw CheckFailed{};
  return 0;
}

// "turiel:2,1[@suffix]" or "flat:EIGxSIZE[,EIGxSIZE...][@suffix]".
struct ParsedComponent {
  std::string spec;
  BiHamiltonian built;
  std::vector<ComponentDistribution> distributions;
};

ParsedComponent parse_component(const std::string& spec, std::size_t index) {
  ParsedComponent c;
  c.spec = spec;
  std::string body = spec, suffix = "_" + std::to_string(index + 1);
  if (const auto at = body.find('@'); at != std::string::npos) {
    suffix = body.substr(at + 1);
    body = body.substr(0, at);
  }
  const auto colon = body.find(':');
  const std::string kind = body.substr(0, colon);
  if (colon == std::string::npos || (kind != "turiel" && kind != "flat")) {
    throw_malformed("BadComponent", "\"" + spec + "\": expected turiel:SIGNATURE or flat:EIGxSIZE,...");
  }
  const std::string args = body.substr(colon + 1);
  if (kind == "turiel") {
    const TurielSignature s = TurielSignature::parse(args);
    c.built = build_normal_form(s, suffix);
    c.distributions = turiel_component_distributions(s, c.built);
    return c;
  }
  FlatSpec f;
  std::stringstream ss(args);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    if (x == std::string::npos) throw_malformed("BadComponent", "\"" + spec + "\": block \"" + item + "\" is not EIGxSIZE");
    const Rational eig = parse_rational(item.substr(0, x));
    const auto size = parse_size_list(item.substr(x + 1), "flat block size");
    f.blocks.push_back(JKBlock::jordan(EigenvalueClass::finite(eig), size.at(0)));
  }
  f.validate();
  c.built = build_flat(f, suffix);
  c.distributions = flat_component_distributions(f, c.built);
  return c;
}

int run_product(const Output& out, const std::vector<std::string>& specs, std::uint64_t seed) {
  std::vector<ParsedComponent> parts;
  for (std::size_t i = 0; i < specs.size(); ++i) parts.push_back(parse_component(specs[i], i));
  std::vector<BiHamiltonian> structures;
  std::vector<std::vector<ComponentDistribution>> dists;
  for (const auto& p : parts) {
    structures.push_back(p.built);
    dists.push_back(p.distributions);
  }
  const ProductBuild prod = product_build(structures);
  const auto compat = compatibility_check(prod.structure.omega0, prod.structure.omega1);

  Rng rng(seed);
  std::vector<Rational> point;
  JKInvariants at;
  for (int attempt = 0;; ++attempt) {
    point = random_point(rng, prod.structure.chart.size());
    try {
      at = jk_invariants_at_point(prod.structure.omega0, prod.structure.omega1, point);
      break;
    } catch (const Error& e) {
      if (e.code() != "PoleAtPoint" || attempt > 50) throw;
    }
  }
  const auto rows = product_verdicts(prod, dists);

  Json j;
  Json comps = Json::array();
  std::ostringstream text;
  text << "components\n";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    comps.push_back({{"spec", parts[i].spec},
                     {"variables", parts[i].built.chart.variables()},
                     {"distributions", parts[i].distributions.size()}});
    text << "  " << pad(parts[i].spec, 20) << parts[i].built.chart.size() << " coordinates, "
         << parts[i].distributions.size() << " invariant distributions\n";
  }
  j["components"] = comps;
  j["dimension"] = prod.structure.chart.size();
  j["compatibility"] = compat_json(compat);
  Json pt = Json::array();
  for (const auto& q : point) pt.push_back(to_string(q));
  j["jk_at_point"] = {{"point", pt}, {"blocks", blocks_to_json(at.blocks, ReportMode::Complex)}};
  text << "compatible " << (compat.all() ? "yes" : "NO") << "\n";
  text << "JK blocks at a random point:";
  for (const auto& b : at.blocks) text << " J" << b.size << "(" << b.eigenvalue.label() << ")";
  text << "\n";

  bool agree = compat.all();
  Json jr = Json::array();
  text << pad("distribution", 28) << pad("dimension", 11) << pad("conjunction", 16) << "computed\n";
  for (const auto& r : rows) {
    agree = agree && r.agrees();
    std::string label;
    for (std::size_t i = 0; i < r.labels.size(); ++i) label += (i ? " x " : "") + ("(" + r.labels[i] + ")");
    jr.push_back({{"labels", r.labels},
                  {"dimension", r.dimension},
                  {"conjunction", r.conjunction ? "integrable" : "non-integrable"},
                  {"computed", r.computed ? "integrable" : "non-integrable"}});
    text << pad(label, 28) << pad(std::to_string(r.dimension), 11)
         << pad(r.conjunction ? "integrable" : "non-integrable", 16) << (r.computed ? "integrable" : "non-integrable")
         << (r.agrees() ? "" : "  DISAGREES") << "\n";
  }
  j["rows"] = jr;
  j["agree"] = agree;
  out.emit(j, text.str());
  if (!agree) throw CheckFailed{};
  return 0;
}

int run_selftest(const Output& out, std::uint64_t seed, bool full, const std::string& criteria) {
  AcceptanceOptions opt = full ? AcceptanceOptions{} : AcceptanceOptions::quick(seed);
  opt.seed = seed;
  std::vector<int> which;
  if (!criteria.empty())
    for (auto c : parse_size_list(criteria, "--criteria")) which.push_back(static_cast<int>(c));
  const auto results = run_acceptance(opt, which);
  Json rows = Json::array();
  std::ostringstream text;
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    rows.push_back({{"criterion", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    text << format_result(r) << "\n";
  }
  Json j{{"seed", seed}, {"full", full}, {"results", rows}, {"passed", all}};
  out.emit(j, text.str());
  if (!all) throw CheckFailed{};
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jordan-Kronecker invariants, invariant subspaces and Turiel normal forms"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  std::uint64_t seed = 1;
  std::size_t trials = 200;
  app.add_flag("--json", out.json, "Emit JSON instead of text");
  app.add_option("-o,--output", out.path, "Write the report to a file");
  app.add_option("--seed", seed, "Base seed for randomized checks")->capture_default_str();
  app.add_option("--trials", trials, "Automorphism trials for invariance checks")->capture_default_str();

  std::string file;
  bool real = false, no_basis = false;
  auto* dec = app.add_subcommand("decompose", "JK invariants and canonical basis of a pencil file");
  dec->add_option("file", file, "Pencil JSON file")->required();
  dec->add_flag("--real", real, "Report quadratic classes as real blocks");
  dec->add_flag("--no-basis", no_basis, "Skip the canonical basis");

  std::string heights, mults;
  bool enumerate = false, count = false, check = false, violating = false;
  auto* sub = app.add_subcommand("subspaces", "Invariant subspace lattice of a nilpotent profile");
  sub->add_option("--heights", heights, "Distinct Jordan heights, descending, e.g. 3,1")->required();
  sub->add_option("--mults", mults, "Block multiplicities (default all 1)");
  auto* en = sub->add_flag("--enumerate", enumerate, "List every admissible tuple (default)");
  auto* co = sub->add_flag("--count", count, "Print only the count");
  en->excludes(co);
  sub->add_flag("--check", check, "Run the automorphism oracle on every tuple");
  sub->add_flag("--violating", violating, "Refute every constraint-violating tuple with a witness");

  std::string signature, which = "all", tuple;
  bool show = false, all_tuples = false;
  auto* tur = app.add_subcommand("turiel", "Identity checks on a Turiel normal form");
  tur->add_option("--signature", signature, "k_1,...,k_n, non-increasing")->required();
  tur->add_option("--check", which, "forms, frames or all")
      ->check(CLI::IsMember({"forms", "frames", "all"}))
      ->capture_default_str();
  tur->add_flag("--show", show, "Print the chart and both forms");

  auto* dis = app.add_subcommand("distribution", "Integrability verdicts of invariant distributions");
  dis->add_option("--signature", signature, "k_1,...,k_n, non-increasing")->required();
  auto* tu = dis->add_option("--tuple", tuple, "Height tuple, or ker:K, im:L, ker:K,im:L");
  auto* al = dis->add_flag("--all", all_tuples, "Every valid tuple");
  tu->excludes(al);
  bool show_generators = false;
  dis->add_flag("--generators", show_generators, "List the generating fields of each distribution");

  std::vector<std::string> specs;
  auto* pro = app.add_subcommand("product", "Direct product of Turiel and flat structures");
  pro->add_option("specs", specs, "turiel:2,1[@suffix] or flat:EIGxSIZE,...[@suffix]")->required();

  bool full = false;
  std::string criteria;
  auto* self = app.add_subcommand("selftest", "Acceptance criteria at reduced size");
  self->add_flag("--full", full, "Use the full acceptance sizes");
  self->add_option("--criteria", criteria, "Subset such as 1,5,9");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*dec) return run_decompose(out, file, real, no_basis);
    if (*sub) return run_subspaces(out, heights, mults, count, check, violating, trials, seed);
    if (*tur) return run_turiel(out, signature, which, show);
    if (*dis) return run_distribution(out, signature, tuple, all_tuples, show_generators);
    if (*pro) return run_product(out, specs, seed);
    if (*self) return run_selftest(out, seed, full, criteria);
  } catch (const CheckFailed&) {
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.category()) {
      case ErrorCategory::Malformed:
        return 1;
      case ErrorCategory::Precondition:
        return 2;
      case ErrorCategory::Internal:
        return 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
