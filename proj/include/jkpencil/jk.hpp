#pragma once

#include <vector>

#include "jkpencil/pencil.hpp"

namespace jkp {

enum class BlockKind { Jordan, Kronecker };

struct JKBlock {
  BlockKind kind = BlockKind::Jordan;
  EigenvalueClass eigenvalue;  // meaningful for Jordan blocks only
  std::size_t size = 0;        // Jordan size, or the Kronecker index

  static JKBlock jordan(const EigenvalueClass& c, std::size_t k) { return {BlockKind::Jordan, c, k}; }
  static JKBlock kronecker(std::size_t k) { return {BlockKind::Kronecker, EigenvalueClass(), k}; }

  bool is_jordan() const { return kind == BlockKind::Jordan; }
  std::size_t dimension() const {
    return is_jordan() ? 2 * size * eigenvalue.degree() : 2 * size + 1;
  }
  friend bool operator==(const JKBlock& a, const JKBlock& b) {
    if (a.kind != b.kind || a.size != b.size) return false;
    return a.kind == BlockKind::Kronecker || a.eigenvalue == b.eigenvalue;
  }
};

// Canonical block order: Jordan blocks grouped by eigenvalue class (class
// order), sizes descending within a class; Kronecker blocks last, indices
// descending.
bool canonical_block_less(const JKBlock& a, const JKBlock& b);
void sort_blocks(std::vector<JKBlock>& blocks);

struct JKInvariants {
  std::vector<JKBlock> blocks;  // canonical order
  std::size_t dimension() const;
  bool realizable() const;
  bool has_kronecker() const;
  friend bool operator==(const JKInvariants& a, const JKInvariants& b) { return a.blocks == b.blocks; }
};

enum class ReportMode { Complex, Real };

JKInvariants jk_invariants(const SkewPencil& p);

struct JKDecomposition {
  JKInvariants invariants;
  QMatrix C;  // columns form the canonical basis
};

// Throws NotRationallyRealizable for classes without a rational basis.
JKDecomposition jk_basis(const SkewPencil& p);

bool verify_canonical(const JKDecomposition& d, const SkewPencil& p);

// The exact canonical matrices for a block list, in the given order.
SkewPencil canonical_pencil(const std::vector<JKBlock>& blocks);
SkewPencil canonical_block(const JKBlock& block);

// Kronecker indices of a pencil with multiplicities, descending.
std::vector<std::size_t> kronecker_indices(const SkewPencil& p);

}  // namespace jkp
