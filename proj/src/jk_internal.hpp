#pragma once

#include <vector>

#include "jkpencil/jk.hpp"

namespace jkp::detail {

// (j+2)n x (j+1)n matrix whose kernel holds the coefficient vectors of
// polynomial solutions v(t) of (A - tB) v(t) = 0 with deg v <= j.
QMatrix toeplitz(const SkewPencil& p, std::size_t j);

// Rank of A - tB over Q(t).
std::size_t generic_rank(const SkewPencil& p);

// A minimal polynomial basis of the kernel of A - tB; entry b holds the
// coefficients v_0..v_k of one basis vector, sorted by degree.
std::vector<std::vector<QVector>> minimal_basis(const SkewPencil& p);

// Columns span a complement of L inside the joint orthogonal of L, where L
// is spanned by the given vectors. The pencil restricted there is regular.
QMatrix regular_complement(const SkewPencil& p, const std::vector<QVector>& L);

// Jordan blocks of a regular pencil (no Kronecker part), canonical order.
std::vector<JKBlock> regular_blocks(const SkewPencil& p);

}  // namespace jkp::detail
