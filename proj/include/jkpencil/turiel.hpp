#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jkpencil/geometry.hpp"
#include "jkpencil/invsub.hpp"

namespace jkp {

// k_1 >= k_2 >= ... >= k_n >= 1. The tangent pencils have Jordan blocks of
// sizes k_1 + 1, k_2, ..., k_n at the single eigenvalue lambda.
struct TurielSignature {
  std::vector<std::size_t> k;

  // Throws Malformed BadSignature.
  void validate() const;
  std::size_t n() const { return k.size(); }
  std::size_t dimension() const;
  std::vector<std::size_t> jordan_sizes() const;
  // Distinct heights of jordan_sizes() with their multiplicities.
  HeightProfile profile() const;
  std::string to_string() const;

  // "2,1" -> {2, 1}; validates.
  static TurielSignature parse(const std::string& text);
  // Every signature with n <= max_n and k_i <= max_k, in lexicographic order.
  static std::vector<TurielSignature> all(std::size_t max_n, std::size_t max_k);
};

struct BiHamiltonian {
  Chart chart;
  DiffForm omega0, omega1;
};

// Chart (x_s^i, y_s^i for s = 1..n, i = 1..k_s, then z, lambda), named
// "x<s>_<i>", "y<s>_<i>", "z", "lambda", each followed by suffix.
Chart turiel_chart(const TurielSignature& s, const std::string& suffix = "");

BiHamiltonian build_normal_form(const TurielSignature& s, const std::string& suffix = "");

// The explicit operator matrix, assembled term by term from its closed
// form rather than by inverting omega0.
OperatorField endomorphism_field(const TurielSignature& s, const std::string& suffix = "");

// Canonical moving frame, ordered e_1^0..e_1^{k_1}, f_1^0..f_1^{k_1}, then
// e_s^1..e_s^{k_s}, f_s^1..f_s^{k_s} for s = 2..n. This is the basis order
// of canonical_pencil(frame_blocks(s)).
struct TurielFrame {
  TurielSignature signature;
  std::vector<VectorField> fields;

  // s is 1-based; i runs over 0..k_1 for s = 1 and 1..k_s otherwise.
  const VectorField& e(std::size_t s, std::size_t i) const;
  const VectorField& f(std::size_t s, std::size_t i) const;
};

TurielFrame frames(const TurielSignature& s, const std::string& suffix = "");
// Coefficient of d/dz in e_1^i.
RatFunc frame_gamma(const TurielSignature& s, std::size_t i, const std::string& suffix = "");
// Jordan blocks of sizes k_1 + 1, k_2, ..., k_n at eigenvalue 0.
std::vector<JKBlock> frame_blocks(const TurielSignature& s);

struct FrameReport {
  bool gram0 = false;        // omega0 Gram matrix equals the canonical B
  bool gram1 = false;        // omega1 Gram matrix equals lambda B + canonical A
  bool recurrences = false;  // (P - lambda E) moves along each chain
  bool gamma1_zero = false;
  bool all() const { return gram0 && gram1 && recurrences && gamma1_zero; }
};

FrameReport frame_check(const TurielSignature& s);

struct FormsReport {
  CompatibilityReport compatibility;
  bool endomorphism_matches = false;  // operator_field == endomorphism_field
  bool nil_recurrences = false;       // (P - lambda E) on coordinate fields
  bool all() const { return compatibility.all() && endomorphism_matches && nil_recurrences; }
};

FormsReport forms_check(const TurielSignature& s);

// The tuple runs over the distinct heights of jordan_sizes(); entry i is the
// largest height kept inside the blocks of height H_i. Throws
// TupleViolatesConstraints.
std::vector<VectorField> invariant_distribution(const TurielSignature& s, const HeightTuple& d);

// Tuple of Ker (P - lambda E)^k cap Im (P - lambda E)^l.
HeightTuple ker_im_tuple(const TurielSignature& s, std::size_t k, std::size_t l);
std::vector<VectorField> ker_im_distribution(const TurielSignature& s, std::size_t k, std::size_t l);

// Non-integrable exactly for the tuples of Ker (P - lambda E)^{k_i} with
// k_i a height of a block other than the largest one.
bool predicted_integrable(const TurielSignature& s, const HeightTuple& d);

// delta^{k_s}_{m_s} k_s / (x_1^1 / 2 + 1) d/dy_1^{k_s}; s is 1-based, s >= 2.
VectorField expected_witness(const TurielSignature& s, std::size_t block, std::size_t m);

struct IntegrabilityReport {
  HeightTuple tuple;
  std::size_t dimension = 0;
  bool predicted = true;
  bool computed = true;
  // First failing pair found by the Frobenius test.
  std::optional<BracketWitness> checker_witness;
  // For non-integrable tuples: the commutator [u_s, v_s] of the two corrected
  // generators of block s, and whether it equals expected_witness.
  std::optional<std::size_t> witness_block;
  std::optional<VectorField> witness;
  bool witness_matches = true;
  bool agrees() const { return predicted == computed && witness_matches; }
};

IntegrabilityReport integrability_verdict(const TurielSignature& s, const HeightTuple& d);

// ---------------------------------------------------------------------------
// Flat structures and products

// Constant-eigenvalue Jordan blocks; no Kronecker or irrational classes.
struct FlatSpec {
  std::vector<JKBlock> blocks;
  // Throws Malformed BadFlatSpec.
  void validate() const;
};

// Chart "u<b>_<i>", "w<b>_<i>" per block b with the canonical block forms.
BiHamiltonian build_flat(const FlatSpec& f, const std::string& suffix = "");

struct FlatDistribution {
  std::vector<HeightTuple> tuples;  // one per eigenvalue class, in block order
  std::vector<VectorField> fields;
};

// Every invariant distribution of a flat structure, as constant spans.
std::vector<FlatDistribution> flat_distributions(const FlatSpec& f, const BiHamiltonian& b);

struct ProductBuild {
  BiHamiltonian structure;
  std::vector<std::size_t> offsets;  // first chart index of each component
};

// Throws NameClash (malformed) or NonCoprimeFactors (precondition).
ProductBuild product_build(const std::vector<BiHamiltonian>& components);

// Field of component c re-expressed on the product chart.
VectorField lift_field(const ProductBuild& p, std::size_t c, const VectorField& X);

struct ComponentDistribution {
  std::string label;  // tuple, or one tuple per eigenvalue class joined by '|'
  std::vector<VectorField> fields;  // on the component's own chart
  bool integrable = true;
};

// Every invariant distribution of a normal form built with
// build_normal_form(s, suffix), with its computed verdict.
std::vector<ComponentDistribution> turiel_component_distributions(const TurielSignature& s,
                                                                  const BiHamiltonian& built);
std::vector<ComponentDistribution> flat_component_distributions(const FlatSpec& f, const BiHamiltonian& built);

struct ProductVerdictRow {
  std::vector<std::string> labels;  // one per component
  std::size_t dimension = 0;
  bool conjunction = true;  // all component verdicts
  bool computed = true;     // verdict of the concatenated distribution
  bool agrees() const { return conjunction == computed; }
};

// One row per choice of a distribution in every component.
std::vector<ProductVerdictRow> product_verdicts(const ProductBuild& p,
                                                const std::vector<std::vector<ComponentDistribution>>& parts);

}  // namespace jkp
