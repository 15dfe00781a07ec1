#include "jkpencil/jk.hpp"

#include <algorithm>
#include <sstream>

#include "jk_internal.hpp"

namespace jkp {

bool canonical_block_less(const JKBlock& a, const JKBlock& b) {
  if (a.kind != b.kind) return a.kind == BlockKind::Jordan;
  if (a.kind == BlockKind::Kronecker) return a.size > b.size;
  if (!(a.eigenvalue == b.eigenvalue)) return a.eigenvalue < b.eigenvalue;
  return a.size > b.size;
}

void sort_blocks(std::vector<JKBlock>& blocks) {
  std::stable_sort(blocks.begin(), blocks.end(), canonical_block_less);
}

std::size_t JKInvariants::dimension() const {
  std::size_t d = 0;
  for (const auto& b : blocks) d += b.dimension();
  return d;
}

bool JKInvariants::realizable() const {
  return std::all_of(blocks.begin(), blocks.end(), [](const JKBlock& b) {
    return !b.is_jordan() || b.eigenvalue.rationally_realizable();
  });
}

bool JKInvariants::has_kronecker() const {
  return std::any_of(blocks.begin(), blocks.end(), [](const JKBlock& b) { return !b.is_jordan(); });
}

// ---------------------------------------------------------------------------
// Canonical matrices

namespace {

void set_skew(QMatrix& m, std::size_t i, std::size_t j, const Rational& v) {
  m(i, j) = v;
  m(j, i) = -v;
}

}  // namespace

SkewPencil canonical_block(const JKBlock& block) {
  const std::size_t k = block.size;
  if (!block.is_jordan()) {
    const std::size_t n = 2 * k + 1;
    QMatrix A(n, n), B(n, n);
    for (std::size_t i = 0; i < k; ++i) {
      set_skew(A, i, k + i, 1);
      set_skew(B, i, k + i + 1, 1);
    }
    return {A, B};
  }
  if (k == 0) throw_internal("BadBlock", "Jordan block of size 0");
  const EigenvalueClass& c = block.eigenvalue;
  if (c.is_irreducible()) {
    const auto beta = c.beta();
    if (!beta) {
      throw_precondition("NotRationallyRealizable",
                         "no rational canonical block for eigenvalue class " + c.label());
    }
    const Rational alpha = c.alpha();
    const std::size_t m = 2 * k, n = 4 * k;
    QMatrix A(n, n), B(n, n);
    for (std::size_t i = 0; i < m; ++i) set_skew(B, i, m + i, 1);
    for (std::size_t b = 0; b < k; ++b) {
      const std::size_t r = 2 * b;
      set_skew(A, r, m + r, alpha);
      set_skew(A, r, m + r + 1, -*beta);
      set_skew(A, r + 1, m + r, *beta);
      set_skew(A, r + 1, m + r + 1, alpha);
      if (b + 1 < k) {
        set_skew(A, r, m + r + 2, 1);
        set_skew(A, r + 1, m + r + 3, 1);
      }
    }
    return {A, B};
  }
  const std::size_t n = 2 * k;
  QMatrix I(n, n), J(n, n);
  for (std::size_t i = 0; i < k; ++i) {
    set_skew(I, i, k + i, 1);
    if (c.is_finite() && sgn(c.value()) != 0) set_skew(J, i, k + i, c.value());
    if (i + 1 < k) set_skew(J, i, k + i + 1, 1);
  }
  if (c.is_infinity()) return {I, J};
  return {J, I};
}

SkewPencil canonical_pencil(const std::vector<JKBlock>& blocks) {
  std::vector<QMatrix> as, bs;
  for (const auto& b : blocks) {
    auto p = canonical_block(b);
    as.push_back(std::move(p.A));
    bs.push_back(std::move(p.B));
  }
  return {block_diagonal(as), block_diagonal(bs)};
}

// ---------------------------------------------------------------------------
// Singular part

namespace detail {

QMatrix toeplitz(const SkewPencil& p, std::size_t j) {
  const std::size_t n = p.n();
  QMatrix T((j + 2) * n, (j + 1) * n);
  const QMatrix minusB = -p.B;
  for (std::size_t i = 0; i <= j + 1; ++i) {
    if (i <= j) T.set_block(i * n, i * n, p.A);
    if (i >= 1) T.set_block(i * n, (i - 1) * n, minusB);
  }
  return T;
}

std::size_t generic_rank(const SkewPencil& p) {
  std::size_t best = 0;
  for (std::size_t t = 0; t <= p.n() && best < p.n(); ++t) {
    best = std::max(best, rank(p.A - p.B * Rational(static_cast<long>(t))));
  }
  return best;
}

std::vector<std::vector<QVector>> minimal_basis(const SkewPencil& p) {
  const std::size_t n = p.n();
  const std::size_t total = n - generic_rank(p);
  std::vector<std::vector<QVector>> chosen;
  for (std::size_t j = 0; chosen.size() < total; ++j) {
    if (j > n) throw_internal("KroneckerSearch", "polynomial kernel degrees exceed n");
    const std::size_t len = (j + 1) * n;
    std::vector<QVector> cols;
    for (const auto& v : chosen) {
      const std::size_t d = v.size() - 1;
      for (std::size_t s = 0; s + d <= j; ++s) {
        QVector w(len, Rational(0));
        for (std::size_t l = 0; l <= d; ++l)
          for (std::size_t r = 0; r < n; ++r) w[(l + s) * n + r] = v[l][r];
        cols.push_back(std::move(w));
      }
    }
    std::size_t have = cols.size();
    const QMatrix K = kernel(toeplitz(p, j));
    for (std::size_t c = 0; c < K.cols() && have < K.cols(); ++c) {
      cols.push_back(K.column(c));
      if (rank(QMatrix::from_columns(len, cols)) == have + 1) {
        ++have;
        std::vector<QVector> v(j + 1, QVector(n));
        for (std::size_t l = 0; l <= j; ++l)
          for (std::size_t r = 0; r < n; ++r) v[l][r] = K(l * n + r, c);
        chosen.push_back(std::move(v));
      } else {
        cols.pop_back();
      }
    }
  }
  return chosen;
}

QMatrix regular_complement(const SkewPencil& p, const std::vector<QVector>& L) {
  const std::size_t n = p.n();
  if (L.empty()) return QMatrix::identity(n);
  const QMatrix Lb = Subspace::span(n, L).basis();
  const QMatrix Lt = Lb.transpose();
  const QMatrix perp = kernel(vstack(Lt * p.A, Lt * p.B));
  const auto e = rref(hstack(Lb, perp));
  std::vector<std::size_t> pick;
  for (auto c : e.pivots)
    if (c >= Lb.cols()) pick.push_back(c - Lb.cols());
  return perp.select_columns(pick);
}

}  // namespace detail

std::vector<std::size_t> kronecker_indices(const SkewPencil& p) {
  const std::size_t n = p.n();
  const std::size_t total = n - detail::generic_rank(p);
  std::vector<std::size_t> out;
  long s1 = 0, s2 = 0;  // s_{j-1}, s_{j-2}
  for (std::size_t j = 0; out.size() < total; ++j) {
    if (j > n) throw_internal("KroneckerSearch", "Kronecker index count does not close");
    const long cols = static_cast<long>((j + 1) * n);
    const long s = cols - static_cast<long>(rank(detail::toeplitz(p, j)));
    const long count = s - 2 * s1 + s2;
    if (count < 0) throw_internal("KroneckerSearch", "negative Kronecker block count");
    for (long c = 0; c < count; ++c) out.push_back(j);
    s2 = s1;
    s1 = s;
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

// ---------------------------------------------------------------------------
// Regular part

namespace {

// Operator whose generalized eigenspaces split a regular pencil, with the
// map from its characteristic factors to eigenvalue classes. Uses B^{-1}A
// when B is invertible; otherwise (A - mu B)^{-1} B, whose eigenvalue
// 1/(lambda - mu) is 0 exactly for the infinite class.
struct SplitOperator {
  QMatrix M;
  bool shifted = false;
  Rational mu;

  EigenvalueClass class_of(const UPoly& g) const {
    if (!shifted) return EigenvalueClass::from_factor(g);
    if (g.degree() == 1 && sgn(g.coeff(0)) == 0) return EigenvalueClass::infinity();
    const UPoly f = compose(reverse(g, static_cast<std::size_t>(g.degree())), UPoly::linear(mu));
    return EigenvalueClass::from_factor(f.monic());
  }
};

SplitOperator split_operator(const SkewPencil& p) {
  SplitOperator s;
  if (auto inv = inverse(p.B)) {
    s.M = *inv * p.A;
    return s;
  }
  for (std::size_t m = 0; m <= p.n(); ++m) {
    const Rational mu(static_cast<long>(m));
    if (auto inv = inverse(p.A - p.B * mu)) {
      s.M = *inv * p.B;
      s.shifted = true;
      s.mu = mu;
      return s;
    }
  }
  throw_internal("SingularPencil", "regular part has no regular shift");
}

struct ClassComponent {
  EigenvalueClass eigenvalue;
  QMatrix basis;
};

std::vector<ClassComponent> class_components(const SkewPencil& p) {
  const SplitOperator s = split_operator(p);
  std::vector<ClassComponent> out;
  for (const auto& f : factor_rational(matrix_char_poly(s.M))) {
    out.push_back({s.class_of(f.factor), kernel(poly_at(pow(f.factor, f.multiplicity), s.M))});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ClassComponent& a, const ClassComponent& b) { return a.eigenvalue < b.eigenvalue; });
  return out;
}

std::size_t height(const QMatrix& N, QVector x) {
  std::size_t h = 0;
  auto nonzero = [](const QVector& v) {
    return std::any_of(v.begin(), v.end(), [](const Rational& c) { return sgn(c) != 0; });
  };
  while (nonzero(x)) {
    x = N.apply(x);
    ++h;
  }
  return h;
}

struct Chain {
  std::size_t size;
  std::vector<QVector> columns;
};

// Splits off Jordan blocks of the nilpotent N, self-adjoint for the
// non-degenerate form F. With J present (J^2 = -E, commuting with N and
// F-self-adjoint) the blocks are the real ones for a quadratic class.
std::vector<Chain> extract_chains(const QMatrix& N, const QMatrix& F, const QMatrix* J) {
  const std::size_t d = N.rows();
  std::vector<Chain> out;
  QMatrix W = QMatrix::identity(d);
  while (W.cols() > 0) {
    std::size_t best = 0, k = 0;
    for (std::size_t c = 0; c < W.cols(); ++c) {
      const std::size_t h = height(N, W.column(c));
      if (h > k) {
        k = h;
        best = c;
      }
    }
    if (k == 0) throw_internal("ChainExtraction", "nilpotent part vanishes on a nonzero space");
    std::vector<QVector> nx{W.column(best)};
    for (std::size_t m = 1; m < k; ++m) nx.push_back(N.apply(nx.back()));

    std::vector<QVector> rows;
    QVector rhs;
    for (std::size_t m = 0; m < k; ++m) {
      rows.push_back(F.transpose().apply(nx[m]));
      rhs.push_back(m + 1 == k ? 1 : 0);
    }
    if (J) {
      for (std::size_t m = 0; m < k; ++m) {
        rows.push_back(F.transpose().apply(J->apply(nx[m])));
        rhs.push_back(0);
      }
    }
    const QMatrix cond = QMatrix::from_columns(d, rows).transpose() * W;
    auto z = solve(cond, rhs);
    if (!z) throw_internal("ChainExtraction", "no dual chain top exists");
    std::vector<QVector> ny(k);
    ny[0] = W.apply(*z);
    for (std::size_t m = 1; m < k; ++m) ny[m] = N.apply(ny[m - 1]);

    Chain ch{k, {}};
    if (J) {
      for (std::size_t a = 0; a < k; ++a) {
        ch.columns.push_back(nx[a]);
        QVector ju = J->apply(nx[a]);
        for (auto& x : ju) x = -x;
        ch.columns.push_back(std::move(ju));
      }
      for (std::size_t b = 0; b < k; ++b) {
        ch.columns.push_back(ny[k - 1 - b]);
        ch.columns.push_back(J->apply(ny[k - 1 - b]));
      }
    } else {
      for (std::size_t a = 0; a < k; ++a) ch.columns.push_back(nx[a]);
      for (std::size_t b = 0; b < k; ++b) ch.columns.push_back(ny[k - 1 - b]);
    }

    const QMatrix used = QMatrix::from_columns(d, ch.columns);
    const QMatrix rest = kernel(used.transpose() * F * W);
    W = W * rest;
    out.push_back(std::move(ch));
  }
  return out;
}

struct RegularBasis {
  std::vector<JKBlock> blocks;
  QMatrix C;
};

RegularBasis regular_basis(const SkewPencil& p) {
  const std::size_t m = p.n();
  RegularBasis out;
  std::vector<QVector> cols;
  for (const auto& comp : class_components(p)) {
    const EigenvalueClass& cls = comp.eigenvalue;
    const SkewPencil r = restrict_pencil(p, comp.basis);
    const std::size_t d = r.n();
    std::vector<Chain> chains;
    if (cls.is_infinity()) {
      const QMatrix N = *inverse(r.A) * r.B;
      chains = extract_chains(N, r.A, nullptr);
    } else if (cls.is_finite()) {
      const QMatrix N = recursion_operator(r) - QMatrix::identity(d) * cls.value();
      chains = extract_chains(N, r.B, nullptr);
    } else {
      const auto beta = cls.beta();
      if (!beta) {
        throw_precondition("NotRationallyRealizable",
                           "no rational canonical basis for eigenvalue class " + cls.label());
      }
      const QMatrix P = recursion_operator(r);
      const QMatrix S = semisimple_part(P, cls.polynomial());
      const QMatrix J = (S - QMatrix::identity(d) * cls.alpha()) * (1 / *beta);
      chains = extract_chains(P - S, r.B, &J);
    }
    for (auto& ch : chains) {
      out.blocks.push_back(JKBlock::jordan(cls, ch.size));
      for (const auto& c : ch.columns) cols.push_back(comp.basis.apply(c));
    }
  }
  out.C = QMatrix::from_columns(m, cols);
  return out;
}

}  // namespace

namespace detail {

std::vector<JKBlock> regular_blocks(const SkewPencil& p) {
  std::vector<JKBlock> out;
  const std::size_t m = p.n();
  if (m == 0) return out;
  const SplitOperator s = split_operator(p);
  for (const auto& f : factor_rational(matrix_char_poly(s.M))) {
    const EigenvalueClass cls = s.class_of(f.factor);
    const long deg = f.factor.degree();
    const QMatrix G = poly_at(f.factor, s.M);
    // Weyr ranks r_j = rank(f(M)^j), j = 0..mult+1.
    std::vector<long> r{static_cast<long>(m)};
    QMatrix Gj = QMatrix::identity(m);
    for (unsigned j = 1; j <= f.multiplicity + 1; ++j) {
      Gj = Gj * G;
      r.push_back(static_cast<long>(rank(Gj)));
    }
    for (unsigned k = 1; k <= f.multiplicity; ++k) {
      const long cells = r[k - 1] - 2 * r[k] + r[k + 1];
      if (cells % deg != 0 || (cells / deg) % 2 != 0) {
        std::ostringstream msg;
        msg << "operator Jordan cell count " << cells << " for class " << cls.label() << " and size " << k
            << " is not an even multiple of the class degree";
        throw_internal("OddCellCount", msg.str());
      }
      for (long c = 0; c < cells / deg / 2; ++c) out.push_back(JKBlock::jordan(cls, k));
    }
  }
  sort_blocks(out);
  return out;
}

}  // namespace detail

namespace {

std::vector<QVector> kernel_coefficient_span(const SkewPencil& p, std::size_t max_index) {
  const std::size_t n = p.n();
  const QMatrix K = kernel(detail::toeplitz(p, max_index));
  std::vector<QVector> vs;
  for (std::size_t c = 0; c < K.cols(); ++c)
    for (std::size_t l = 0; l <= max_index; ++l) {
      QVector v(n);
      for (std::size_t r = 0; r < n; ++r) v[r] = K(l * n + r, c);
      vs.push_back(std::move(v));
    }
  return vs;
}

}  // namespace

JKInvariants jk_invariants(const SkewPencil& p) {
  JKInvariants inv;
  const auto kron = kronecker_indices(p);
  QMatrix R = QMatrix::identity(p.n());
  if (!kron.empty()) R = detail::regular_complement(p, kernel_coefficient_span(p, kron.front()));
  inv.blocks = detail::regular_blocks(restrict_pencil(p, R));
  for (auto k : kron) inv.blocks.push_back(JKBlock::kronecker(k));
  sort_blocks(inv.blocks);
  if (inv.dimension() != p.n()) throw_internal("DimensionMismatch", "block dimensions do not add up to n");
  return inv;
}

// ---------------------------------------------------------------------------
// Canonical basis

namespace {

QVector add(QVector a, const QVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

QVector row_of(const QMatrix& X, const QVector& v) { return X.transpose().apply(v); }  // v^T X

}  // namespace

JKDecomposition jk_basis(const SkewPencil& p) {
  const std::size_t n = p.n();
  JKDecomposition out;
  out.invariants = jk_invariants(p);
  if (!out.invariants.realizable()) {
    std::string labels;
    for (const auto& b : out.invariants.blocks)
      if (b.is_jordan() && !b.eigenvalue.rationally_realizable()) {
        const std::string l = b.eigenvalue.label();
        if (labels.find(l) == std::string::npos) labels += (labels.empty() ? "" : ", ") + l;
      }
    throw_precondition("NotRationallyRealizable", "no rational canonical basis for eigenvalue class " + labels);
  }

  auto mb = detail::minimal_basis(p);
  std::stable_sort(mb.begin(), mb.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });

  // q-columns of every Kronecker block, and the dual targets of its p's.
  std::vector<QVector> qs;
  struct PSlot {
    std::size_t block, i;
  };
  std::vector<PSlot> slots;
  std::vector<std::size_t> q_start;
  for (std::size_t b = 0; b < mb.size(); ++b) {
    const std::size_t k = mb[b].size() - 1;
    q_start.push_back(qs.size());
    for (std::size_t j = 1; j <= k + 1; ++j) qs.push_back(mb[b][k + 1 - j]);
    for (std::size_t i = 1; i <= k; ++i) slots.push_back({b, i});
  }
  const std::size_t dL = qs.size(), np = slots.size();

  std::vector<QVector> ps;
  QMatrix Rb = QMatrix::identity(n);
  if (dL > 0) {
    const QMatrix Lm = QMatrix::from_columns(n, qs);
    const QMatrix AL = p.A * Lm, BL = p.B * Lm;
    if (np > 0) {
      const QMatrix dual = vstack(AL.transpose(), BL.transpose());  // rows give A(p, q) then B(p, q)
      QMatrix targets(2 * dL, np);
      for (std::size_t a = 0; a < np; ++a) {
        const auto [b, i] = slots[a];
        targets(q_start[b] + i - 1, a) = 1;      // A(p_i, q_i) = 1
        targets(dL + q_start[b] + i, a) = 1;     // B(p_i, q_{i+1}) = 1
      }
      auto sol = solve_many(dual, targets);
      if (!sol) throw_internal("KroneckerBasis", "dual system for the p-vectors is inconsistent");
      for (std::size_t a = 0; a < np; ++a) ps.push_back(sol->column(a));
    }
    const QMatrix Lt = Lm.transpose();
    const QMatrix perp = kernel(vstack(Lt * p.A, Lt * p.B));
    Rb = detail::regular_complement(p, qs);
    const std::size_t dR = Rb.cols(), dP = perp.cols();

    // Stage 1: p_a += perp c_a and r_j += L F_j so that every p is orthogonal
    // to every r under both forms.
    if (np > 0 && dR > 0) {
      const std::size_t unknowns = np * dP + dL * dR;
      std::vector<QVector> eqs;
      QVector rhs;
      for (std::size_t a = 0; a < np; ++a)
        for (std::size_t j = 0; j < dR; ++j)
          for (const QMatrix* X : {&p.A, &p.B}) {
            const QVector r = Rb.column(j);
            const QVector Xr = X->apply(r);
            QVector row(unknowns, Rational(0));
            const QVector cpart = perp.transpose().apply(Xr);
            for (std::size_t c = 0; c < dP; ++c) row[a * dP + c] = cpart[c];
            const QVector fpart = Lt.apply(row_of(*X, ps[a]));
            for (std::size_t c = 0; c < dL; ++c) row[np * dP + j * dL + c] = fpart[c];
            eqs.push_back(std::move(row));
            rhs.push_back(-dot(ps[a], Xr));
          }
      const QMatrix sys = QMatrix::from_columns(unknowns, eqs).transpose();
      auto sol = solve(sys, rhs);
      if (!sol) throw_internal("KroneckerBasis", "cannot separate the singular part from the regular part");
      for (std::size_t a = 0; a < np; ++a) {
        QVector c(sol->begin() + static_cast<long>(a * dP), sol->begin() + static_cast<long>((a + 1) * dP));
        ps[a] = add(ps[a], perp.apply(c));
      }
      for (std::size_t j = 0; j < dR; ++j) {
        const auto base = sol->begin() + static_cast<long>(np * dP + j * dL);
        QVector f(base, base + static_cast<long>(dL));
        const QVector lf = Lm.apply(f);
        for (std::size_t r = 0; r < n; ++r) Rb(r, j) += lf[r];
      }
    }

    // Stage 2: p_a += L g_a so that the p's are isotropic for both forms.
    if (np > 1) {
      const std::size_t unknowns = np * dL;
      std::vector<QVector> eqs;
      QVector rhs;
      for (std::size_t a = 0; a < np; ++a)
        for (std::size_t b = a + 1; b < np; ++b)
          for (const QMatrix* X : {&p.A, &p.B}) {
            QVector row(unknowns, Rational(0));
            const QVector ga = Lt.apply(X->apply(ps[b]));
            const QVector gb = Lt.apply(X->apply(ps[a]));
            for (std::size_t c = 0; c < dL; ++c) {
              row[a * dL + c] += ga[c];
              row[b * dL + c] -= gb[c];
            }
            eqs.push_back(std::move(row));
            rhs.push_back(-bilinear(*X, ps[a], ps[b]));
          }
      const QMatrix sys = QMatrix::from_columns(unknowns, eqs).transpose();
      auto sol = solve(sys, rhs);
      if (!sol) throw_internal("KroneckerBasis", "cannot make the p-vectors isotropic");
      for (std::size_t a = 0; a < np; ++a) {
        QVector g(sol->begin() + static_cast<long>(a * dL), sol->begin() + static_cast<long>((a + 1) * dL));
        ps[a] = add(ps[a], Lm.apply(g));
      }
    }
  }

  std::vector<QVector> cols;
  std::vector<JKBlock> blocks;
  if (Rb.cols() > 0) {
    const RegularBasis rb = regular_basis(restrict_pencil(p, Rb));
    const QMatrix full = Rb * rb.C;
    for (std::size_t c = 0; c < full.cols(); ++c) cols.push_back(full.column(c));
    blocks = rb.blocks;
  }
  std::size_t a = 0;
  for (std::size_t b = 0; b < mb.size(); ++b) {
    const std::size_t k = mb[b].size() - 1;
    for (std::size_t i = 0; i < k; ++i) cols.push_back(ps[a++]);
    for (std::size_t j = 0; j <= k; ++j) cols.push_back(qs[q_start[b] + j]);
    blocks.push_back(JKBlock::kronecker(k));
  }
  if (!(JKInvariants{blocks} == out.invariants)) {
    throw_internal("BasisMismatch", "canonical basis blocks disagree with the invariants");
  }
  out.C = QMatrix::from_columns(n, cols);
  return out;
}

bool verify_canonical(const JKDecomposition& d, const SkewPencil& p) {
  const std::size_t n = p.n();
  if (d.C.rows() != n || d.C.cols() != n || d.invariants.dimension() != n) return false;
  if (n > 0 && sgn(determinant(d.C)) == 0) return false;
  SkewPencil canon;
  try {
    canon = canonical_pencil(d.invariants.blocks);
  } catch (const Error&) {
    return false;
  }
  const SkewPencil got = congruence(p, d.C);
  return got.A == canon.A && got.B == canon.B;
}

}  // namespace jkp
