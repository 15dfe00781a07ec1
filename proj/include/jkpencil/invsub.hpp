#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jkpencil/gaussian.hpp"
#include "jkpencil/generators.hpp"
#include "jkpencil/jk.hpp"

namespace jkp {

// Distinct Jordan heights k_1 > ... > k_N with block multiplicities l_i.
struct HeightProfile {
  std::vector<std::size_t> heights;
  std::vector<std::size_t> mults;

  // Throws Malformed unless heights strictly decrease, all entries are
  // positive and the two lists have the same nonzero length.
  void validate() const;
  // 2 * sum l_i k_i for a rational eigenvalue.
  std::size_t dimension() const;
  std::size_t size() const { return heights.size(); }

  // Profile of the Jordan blocks in a list; all must share one class.
  static HeightProfile from_blocks(const std::vector<JKBlock>& blocks);
};

using HeightTuple = std::vector<std::size_t>;

bool satisfies_constraints(const HeightProfile& h, const HeightTuple& t);
// Throws TupleViolatesConstraints (precondition) naming the failing index.
void check_tuple(const HeightProfile& h, const HeightTuple& t);

// All admissible tuples in lexicographic order.
std::vector<HeightTuple> enumerate_invariant_subspaces(const HeightProfile& h);
// (k_N + 1) * prod_{i<N} (k_i - k_{i+1} + 1)
std::uint64_t invariant_subspace_count(const HeightProfile& h);
// Tuples with 0 <= m_i <= k_i that break a chain constraint.
std::vector<HeightTuple> violating_tuples(const HeightProfile& h);

// Canonical Jordan blocks for a profile, default eigenvalue 0.
std::vector<JKBlock> profile_blocks(const HeightProfile& h,
                                    const EigenvalueClass& c = EigenvalueClass::finite(0));

// Sum over i of Ker N^{m_i} cap Im N^{k_i - m_i}, in the canonical basis of
// d, where N is the nilpotent part of the single eigenvalue class of d.
Subspace subspace_from_tuple(const JKDecomposition& d, const HeightTuple& t);

// Direct sum over heights of the vectors of height <= m_i inside the
// blocks of height k_i, in canonical coordinates. No constraint check, so
// violating tuples can be realized too.
Subspace height_sum_subspace(const std::vector<JKBlock>& blocks, const HeightTuple& t);

// Samples automorphisms exp(Nil) * S of a canonical Jordan pencil whose
// classes are rational, infinite, or quadratic with rational beta. Nil is
// a random element of the strictly height-lowering part of the automorphism
// Lie algebra; S acts on each height group by random transvections of the
// form induced on chain tops (complex-linear ones for quadratic classes).
class AutomorphismSampler {
 public:
  explicit AutomorphismSampler(std::vector<JKBlock> blocks);

  QMatrix sample(Rng& rng) const;
  const SkewPencil& pencil() const { return pencil_; }
  const std::vector<JKBlock>& blocks() const { return blocks_; }

  struct ClassData;

 private:
  std::vector<JKBlock> blocks_;
  SkewPencil pencil_;
  std::shared_ptr<std::vector<ClassData>> classes_;
};

// Q preserving both canonical forms of the profile (eigenvalue 0).
QMatrix random_automorphism(const HeightProfile& h, std::uint64_t seed);

struct InvarianceVerdict {
  bool invariant = true;
  std::optional<QMatrix> witness;  // automorphism Q with Q W not inside W
  std::size_t witness_trial = 0;
  std::string reason;
};

// Randomized oracle over a fixed set of automorphisms; trial i uses
// split_seed(seed, i), so verdicts do not depend on the thread count.
class InvarianceOracle {
 public:
  InvarianceOracle(std::vector<JKBlock> blocks, std::size_t trials, std::uint64_t seed);
  InvarianceVerdict check(const Subspace& W) const;
  const SkewPencil& pencil() const { return sampler_.pencil(); }

 private:
  AutomorphismSampler sampler_;
  std::vector<QMatrix> autos_;
  std::vector<QMatrix> operators_;  // nilpotent parts; invariant subspaces are stable under them
};

// W in the canonical basis of d.
InvarianceVerdict is_invariant(const Subspace& W, const JKDecomposition& d, std::size_t trials,
                               std::uint64_t seed);

// ---------------------------------------------------------------------------
// Quadratic classes

struct ComplexStructure {
  QMatrix J;
  EigenvalueClass eigenvalue;
};

// J = (S - alpha E) / beta with S the semisimple part of P. Throws
// NotQuadraticComponent or IrrationalBeta (precondition).
ComplexStructure complex_structure(const SkewPencil& component);

struct ComplexPencil {
  QMatrix A_re, A_im, B_re, B_im;
};

// A^C(u, v) = A(u, v) - i A(u, Jv) and likewise for B, as real matrices.
ComplexPencil complexify(const SkewPencil& component, const ComplexStructure& J);

// Jordan sizes (descending, one per complex JK block) of the complexified
// pencil, computed over Q(i) in a complex basis of (V, J).
std::vector<std::size_t> complex_jordan_sizes(const SkewPencil& component, const ComplexStructure& J);

// J-invariance plus the randomized automorphism test on the canonical form.
InvarianceVerdict real_invariance_check(const Subspace& W, const SkewPencil& component,
                                        const ComplexStructure& J, std::size_t trials, std::uint64_t seed);

}  // namespace jkp
