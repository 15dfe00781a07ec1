#include "jkpencil/invsub.hpp"

#include <algorithm>
#include <sstream>

#include "jkpencil/parallel.hpp"

namespace jkp {

// ---------------------------------------------------------------------------
// Height profiles and tuples

void HeightProfile::validate() const {
  if (heights.empty() || heights.size() != mults.size()) {
    throw_malformed("BadProfile", "heights and multiplicities must be nonempty lists of equal length");
  }
  for (std::size_t i = 0; i < heights.size(); ++i) {
    if (heights[i] == 0 || mults[i] == 0) throw_malformed("BadProfile", "heights and multiplicities must be >= 1");
    if (i > 0 && heights[i] >= heights[i - 1]) throw_malformed("BadProfile", "heights must strictly decrease");
  }
}

std::size_t HeightProfile::dimension() const {
  std::size_t d = 0;
  for (std::size_t i = 0; i < heights.size(); ++i) d += 2 * heights[i] * mults[i];
  return d;
}

HeightProfile HeightProfile::from_blocks(const std::vector<JKBlock>& blocks) {
  HeightProfile h;
  std::vector<std::size_t> sizes;
  for (const auto& b : blocks) {
    if (!b.is_jordan() || !(b.eigenvalue == blocks.front().eigenvalue)) {
      throw_precondition("SingleClassRequired", "expected Jordan blocks of a single eigenvalue class");
    }
    sizes.push_back(b.size);
  }
  std::sort(sizes.rbegin(), sizes.rend());
  for (auto k : sizes) {
    if (!h.heights.empty() && h.heights.back() == k) {
      ++h.mults.back();
    } else {
      h.heights.push_back(k);
      h.mults.push_back(1);
    }
  }
  return h;
}

bool satisfies_constraints(const HeightProfile& h, const HeightTuple& t) {
  if (t.size() != h.size()) return false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] > h.heights[i]) return false;
    if (i + 1 < t.size()) {
      if (t[i] < t[i + 1]) return false;
      if (t[i] - t[i + 1] > h.heights[i] - h.heights[i + 1]) return false;
    }
  }
  return true;
}

void check_tuple(const HeightProfile& h, const HeightTuple& t) {
  if (t.size() != h.size()) {
    throw_precondition("TupleViolatesConstraints", "tuple length " + std::to_string(t.size()) +
                                                       " differs from the number of heights " +
                                                       std::to_string(h.size()));
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::ostringstream msg;
    if (t[i] > h.heights[i]) {
      msg << "m_" << i + 1 << " = " << t[i] << " exceeds height " << h.heights[i];
    } else if (i + 1 < t.size() && (t[i] < t[i + 1] || t[i] - t[i + 1] > h.heights[i] - h.heights[i + 1])) {
      msg << "need 0 <= m_" << i + 1 << " - m_" << i + 2 << " <= " << h.heights[i] - h.heights[i + 1] << ", got m_"
          << i + 1 << " = " << t[i] << ", m_" << i + 2 << " = " << t[i + 1];
    } else {
      continue;
    }
    throw_precondition("TupleViolatesConstraints", msg.str());
  }
}

std::vector<HeightTuple> enumerate_invariant_subspaces(const HeightProfile& h) {
  h.validate();
  std::vector<HeightTuple> out;
  HeightTuple t(h.size());
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == h.size()) {
      out.push_back(t);
      return;
    }
    std::size_t lo = 0, hi = h.heights[i];
    if (i > 0) {
      const std::size_t gap = h.heights[i - 1] - h.heights[i];
      lo = t[i - 1] > gap ? t[i - 1] - gap : 0;
      hi = std::min(hi, t[i - 1]);
    }
    for (std::size_t m = lo; m <= hi; ++m) {
      t[i] = m;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

std::uint64_t invariant_subspace_count(const HeightProfile& h) {
  h.validate();
  std::uint64_t c = h.heights.back() + 1;
  for (std::size_t i = 0; i + 1 < h.size(); ++i) c *= h.heights[i] - h.heights[i + 1] + 1;
  return c;
}

std::vector<HeightTuple> violating_tuples(const HeightProfile& h) {
  h.validate();
  std::vector<HeightTuple> out;
  HeightTuple t(h.size(), 0);
  for (;;) {
    if (!satisfies_constraints(h, t)) out.push_back(t);
    std::size_t i = h.size();
    while (i > 0) {
      --i;
      if (t[i] < h.heights[i]) {
        ++t[i];
        break;
      }
      t[i] = 0;
      if (i == 0) return out;
    }
  }
}

std::vector<JKBlock> profile_blocks(const HeightProfile& h, const EigenvalueClass& c) {
  h.validate();
  std::vector<JKBlock> out;
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < h.mults[i]; ++j) out.push_back(JKBlock::jordan(c, h.heights[i]));
  return out;
}

// ---------------------------------------------------------------------------
// Class structure in canonical coordinates

namespace {

bool is_zero_vec(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
}

std::size_t height_of(const QMatrix& N, QVector x) {
  std::size_t h = 0;
  while (!is_zero_vec(x)) {
    x = N.apply(x);
    ++h;
  }
  return h;
}

struct ClassNilpotent {
  QMatrix N, F;
  std::optional<QMatrix> J;
};

ClassNilpotent class_nilpotent(const SkewPencil& c, const EigenvalueClass& cls) {
  const std::size_t d = c.n();
  if (cls.is_infinity()) return {*inverse(c.A) * c.B, c.A, std::nullopt};
  const QMatrix P = recursion_operator(c);
  if (cls.is_finite()) return {P - QMatrix::identity(d) * cls.value(), c.B, std::nullopt};
  const auto beta = cls.beta();
  if (!beta) throw_precondition("IrrationalBeta", "class " + cls.label() + " has no rational complex structure");
  const QMatrix S = semisimple_part(P, cls.polynomial());
  QMatrix J = (S - QMatrix::identity(d) * cls.alpha()) * (1 / *beta);
  return {P - S, c.B, std::move(J)};
}

// Range of each maximal run of blocks sharing a class, in block order.
struct ClassRange {
  EigenvalueClass eigenvalue;
  std::size_t offset, dim;
  std::vector<JKBlock> blocks;
};

std::vector<ClassRange> class_ranges(const std::vector<JKBlock>& blocks) {
  std::vector<ClassRange> out;
  std::size_t off = 0;
  for (const auto& b : blocks) {
    if (!b.is_jordan()) throw_precondition("KroneckerUnsupported", "invariant subspaces need a regular pencil");
    if (out.empty() || !(out.back().eigenvalue == b.eigenvalue)) out.push_back({b.eigenvalue, off, 0, {}});
    out.back().dim += b.dimension();
    out.back().blocks.push_back(b);
    off += b.dimension();
  }
  return out;
}

int draw_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

int draw_nonzero(Rng& rng) {
  for (;;) {
    const int c = draw_int(rng, -3, 3);
    if (c != 0) return c;
  }
}

}  // namespace

struct AutomorphismSampler::ClassData {
  std::size_t offset = 0, dim = 0;
  ClassNilpotent nil;
  std::vector<QMatrix> lie_basis;  // strictly height-lowering automorphism algebra
  struct Group {
    std::size_t height;
    std::vector<QVector> tops;
    QMatrix G;                          // real case
    Matrix<GaussianRational> Gc;        // complex case
  };
  std::vector<Group> groups;
  QMatrix src_inv;
};

namespace {

// Lie algebra elements X with XN = NX, X^T F + F X = 0, XJ = JX, and X
// supported on entries (u, v) with key(u) < key(v).
std::vector<QMatrix> lowering_algebra(const ClassNilpotent& cn, const std::vector<std::pair<std::size_t, long>>& key) {
  const std::size_t d = cn.N.rows();
  std::vector<std::pair<std::size_t, std::size_t>> unknowns;
  for (std::size_t u = 0; u < d; ++u)
    for (std::size_t v = 0; v < d; ++v)
      if (key[u] < key[v]) unknowns.emplace_back(u, v);
  if (unknowns.empty()) return {};
  const std::size_t blocks = cn.J ? 3 : 2;
  QMatrix M(blocks * d * d, unknowns.size());
  const QMatrix& N = cn.N;
  const QMatrix& F = cn.F;
  for (std::size_t c = 0; c < unknowns.size(); ++c) {
    const auto [u, v] = unknowns[c];
    // X N - N X with X = E_uv
    for (std::size_t b = 0; b < d; ++b) M(u * d + b, c) += N(v, b);
    for (std::size_t a = 0; a < d; ++a) M(a * d + v, c) -= N(a, u);
    // X^T F + F X
    const std::size_t o = d * d;
    for (std::size_t b = 0; b < d; ++b) M(o + v * d + b, c) += F(u, b);
    for (std::size_t a = 0; a < d; ++a) M(o + a * d + v, c) += F(a, u);
    if (cn.J) {
      const QMatrix& J = *cn.J;
      const std::size_t o2 = 2 * d * d;
      for (std::size_t b = 0; b < d; ++b) M(o2 + u * d + b, c) += J(v, b);
      for (std::size_t a = 0; a < d; ++a) M(o2 + a * d + v, c) -= J(a, u);
    }
  }
  const QMatrix K = kernel(M);
  std::vector<QMatrix> out;
  for (std::size_t k = 0; k < K.cols(); ++k) {
    QMatrix X(d, d);
    for (std::size_t c = 0; c < unknowns.size(); ++c) X(unknowns[c].first, unknowns[c].second) = K(c, k);
    out.push_back(std::move(X));
  }
  return out;
}

QVector scaled_add(QVector acc, const Rational& s, const QVector& v) {
  if (sgn(s) == 0) return acc;
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += s * v[i];
  return acc;
}

QMatrix exp_nilpotent(const QMatrix& X) {
  const std::size_t n = X.rows();
  QMatrix acc = QMatrix::identity(n), term = QMatrix::identity(n);
  for (std::size_t j = 1; j <= n; ++j) {
    term = term * X * Rational(1, static_cast<long>(j));
    if (term.is_zero()) break;
    acc += term;
  }
  return acc;
}

}  // namespace

AutomorphismSampler::AutomorphismSampler(std::vector<JKBlock> blocks)
    : blocks_(std::move(blocks)), classes_(std::make_shared<std::vector<ClassData>>()) {
  pencil_ = canonical_pencil(blocks_);
  for (const auto& range : class_ranges(blocks_)) {
    ClassData cd;
    cd.offset = range.offset;
    cd.dim = range.dim;
    std::vector<std::size_t> idx(range.dim);
    for (std::size_t i = 0; i < range.dim; ++i) idx[i] = range.offset + i;
    const QMatrix V = QMatrix::identity(pencil_.n()).select_columns(idx);
    cd.nil = class_nilpotent(restrict_pencil(pencil_, V), range.eigenvalue);

    std::vector<std::size_t> block_size(range.dim), heights(range.dim);
    std::size_t off = 0;
    for (const auto& b : range.blocks) {
      for (std::size_t i = 0; i < b.dimension(); ++i) block_size[off + i] = b.size;
      off += b.dimension();
    }
    std::vector<std::pair<std::size_t, long>> key(range.dim);
    for (std::size_t i = 0; i < range.dim; ++i) {
      QVector e(range.dim);
      e[i] = 1;
      heights[i] = height_of(cd.nil.N, e);
      key[i] = {heights[i], -static_cast<long>(block_size[i])};
    }
    cd.lie_basis = lowering_algebra(cd.nil, key);

    // Height groups: chain tops spanning the top level over R or over C.
    std::vector<QVector> src;
    for (std::size_t i = 0; i < range.dim; ++i) {
      const std::size_t k = block_size[i];
      if (heights[i] != k) continue;
      auto it = std::find_if(cd.groups.begin(), cd.groups.end(), [&](const auto& g) { return g.height == k; });
      if (it == cd.groups.end()) {
        cd.groups.push_back({k, {}, {}, {}});
        it = cd.groups.end() - 1;
      }
      QVector e(range.dim);
      e[i] = 1;
      std::vector<QVector> span = it->tops;
      if (cd.nil.J)
        for (const auto& t : it->tops) span.push_back(cd.nil.J->apply(t));
      const std::size_t before = span.empty() ? 0 : rank(QMatrix::from_columns(range.dim, span));
      span.push_back(e);
      if (rank(QMatrix::from_columns(range.dim, span)) > before) it->tops.push_back(e);
    }
    std::sort(cd.groups.begin(), cd.groups.end(), [](const auto& a, const auto& b) { return a.height > b.height; });
    for (auto& g : cd.groups) {
      const std::size_t l = g.tops.size();
      std::vector<QVector> bottoms;
      for (const auto& t : g.tops) {
        QVector v = t;
        for (std::size_t s = 1; s < g.height; ++s) v = cd.nil.N.apply(v);
        bottoms.push_back(std::move(v));
      }
      if (cd.nil.J) {
        g.Gc = Matrix<GaussianRational>(l, l);
        for (std::size_t a = 0; a < l; ++a)
          for (std::size_t b = 0; b < l; ++b)
            g.Gc(a, b) = GaussianRational(bilinear(cd.nil.F, bottoms[a], g.tops[b]),
                                          -bilinear(cd.nil.F, bottoms[a], cd.nil.J->apply(g.tops[b])));
      } else {
        g.G = QMatrix(l, l);
        for (std::size_t a = 0; a < l; ++a)
          for (std::size_t b = 0; b < l; ++b) g.G(a, b) = bilinear(cd.nil.F, bottoms[a], g.tops[b]);
      }
      for (const auto& t : g.tops) {
        QVector v = t;
        for (std::size_t s = 0; s < g.height; ++s) {
          src.push_back(v);
          if (cd.nil.J) src.push_back(cd.nil.J->apply(v));
          v = cd.nil.N.apply(v);
        }
      }
    }
    auto inv = inverse(QMatrix::from_columns(range.dim, src));
    if (!inv || src.size() != range.dim) throw_internal("ChainBasis", "chain vectors do not form a basis");
    cd.src_inv = *inv;
    classes_->push_back(std::move(cd));
  }
}

QMatrix AutomorphismSampler::sample(Rng& rng) const {
  const std::size_t n = pencil_.n();
  QMatrix Q = QMatrix::identity(n);
  for (const auto& cd : *classes_) {
    const std::size_t d = cd.dim;
    // S: transvections T = E + c v v^T G on the chain tops of each group.
    std::vector<QVector> img;
    for (const auto& g : cd.groups) {
      const std::size_t l = g.tops.size();
      const int count = draw_int(rng, 1, 10);
      QMatrix Mre = QMatrix::identity(l), Mim(l, l);
      if (cd.nil.J) {
        Matrix<GaussianRational> M = Matrix<GaussianRational>::identity(l);
        for (int t = 0; t < count; ++t) {
          Vec<GaussianRational> v(l);
          bool zero = true;
          while (zero) {
            for (auto& x : v) {
              x = GaussianRational(draw_int(rng, -3, 3), draw_int(rng, -3, 3));
              if (!x.is_zero()) zero = false;
            }
          }
          const GaussianRational c(draw_nonzero(rng), draw_int(rng, -3, 3));
          Matrix<GaussianRational> T = Matrix<GaussianRational>::identity(l);
          const Vec<GaussianRational> vG = g.Gc.transpose().apply(v);
          for (std::size_t a = 0; a < l; ++a)
            for (std::size_t b = 0; b < l; ++b) T(a, b) += c * v[a] * vG[b];
          M = T * M;
        }
        for (std::size_t a = 0; a < l; ++a)
          for (std::size_t b = 0; b < l; ++b) {
            Mre(a, b) = M(a, b).re;
            Mim(a, b) = M(a, b).im;
          }
      } else {
        for (int t = 0; t < count; ++t) {
          QVector v(l);
          bool zero = true;
          while (zero) {
            for (auto& x : v) {
              x = draw_int(rng, -3, 3);
              if (sgn(x) != 0) zero = false;
            }
          }
          const Rational c = draw_nonzero(rng);
          QMatrix T = QMatrix::identity(l);
          const QVector vG = g.G.transpose().apply(v);
          for (std::size_t a = 0; a < l; ++a)
            for (std::size_t b = 0; b < l; ++b) T(a, b) += c * v[a] * vG[b];
          Mre = T * Mre;
        }
      }
      // N^s t_a -> sum_b M_ba N^s t_b, where (x + iy) w means x w + y J w.
      std::vector<std::vector<QVector>> levels(l);
      for (std::size_t a = 0; a < l; ++a) {
        QVector v = g.tops[a];
        for (std::size_t s = 0; s < g.height; ++s) {
          levels[a].push_back(v);
          v = cd.nil.N.apply(v);
        }
      }
      for (std::size_t a = 0; a < l; ++a)
        for (std::size_t s = 0; s < g.height; ++s) {
          QVector out(d);
          for (std::size_t b = 0; b < l; ++b) {
            out = scaled_add(std::move(out), Mre(b, a), levels[b][s]);
            if (cd.nil.J) out = scaled_add(std::move(out), Mim(b, a), cd.nil.J->apply(levels[b][s]));
          }
          img.push_back(out);
          if (cd.nil.J) img.push_back(cd.nil.J->apply(out));
        }
    }
    const QMatrix S = QMatrix::from_columns(d, img) * cd.src_inv;

    QMatrix X(d, d);
    for (const auto& K : cd.lie_basis) {
      const int c = draw_int(rng, -2, 2);
      if (c != 0) X += K * Rational(c);
    }
    Q.set_block(cd.offset, cd.offset, exp_nilpotent(X) * S);
  }
  return Q;
}

QMatrix random_automorphism(const HeightProfile& h, std::uint64_t seed) {
  Rng rng(seed);
  return AutomorphismSampler(profile_blocks(h)).sample(rng);
}

// ---------------------------------------------------------------------------
// Subspaces from tuples

namespace {

struct SingleClass {
  HeightProfile profile;
  SkewPencil pencil;
  ClassNilpotent nil;
};

SingleClass single_class(const std::vector<JKBlock>& blocks) {
  if (blocks.empty()) throw_precondition("SingleClassRequired", "no Jordan blocks");
  SingleClass sc;
  sc.profile = HeightProfile::from_blocks(blocks);
  sc.pencil = canonical_pencil(blocks);
  sc.nil = class_nilpotent(sc.pencil, blocks.front().eigenvalue);
  return sc;
}

QMatrix mat_pow(const QMatrix& M, std::size_t e) {
  QMatrix r = QMatrix::identity(M.rows());
  for (std::size_t i = 0; i < e; ++i) r = r * M;
  return r;
}

}  // namespace

Subspace subspace_from_tuple(const JKDecomposition& d, const HeightTuple& t) {
  const SingleClass sc = single_class(d.invariants.blocks);
  check_tuple(sc.profile, t);
  const std::size_t n = sc.pencil.n();
  Subspace W(n);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == 0) continue;
    const Subspace ker = kernel_of(mat_pow(sc.nil.N, t[i]));
    const Subspace im = image_of(mat_pow(sc.nil.N, sc.profile.heights[i] - t[i]));
    W = W + intersect(ker, im);
  }
  return W;
}

Subspace height_sum_subspace(const std::vector<JKBlock>& blocks, const HeightTuple& t) {
  const SingleClass sc = single_class(blocks);
  if (t.size() != sc.profile.size()) throw_precondition("TupleViolatesConstraints", "tuple length mismatch");
  const std::size_t n = sc.pencil.n();
  std::vector<QVector> vs;
  std::size_t off = 0;
  for (const auto& b : blocks) {
    const std::size_t i = static_cast<std::size_t>(
        std::find(sc.profile.heights.begin(), sc.profile.heights.end(), b.size) - sc.profile.heights.begin());
    for (std::size_t j = 0; j < b.dimension(); ++j) {
      QVector e(n);
      e[off + j] = 1;
      if (height_of(sc.nil.N, e) <= t[i]) vs.push_back(std::move(e));
    }
    off += b.dimension();
  }
  return Subspace::span(n, vs);
}

// ---------------------------------------------------------------------------
// Invariance oracle

InvarianceOracle::InvarianceOracle(std::vector<JKBlock> blocks, std::size_t trials, std::uint64_t seed)
    : sampler_(std::move(blocks)), autos_(trials) {
  parallel_for(trials, [&](std::size_t i) {
    Rng rng(split_seed(seed, i));
    autos_[i] = sampler_.sample(rng);
  });
  const std::size_t n = sampler_.pencil().n();
  QMatrix Ntot(n, n);
  for (const auto& range : class_ranges(sampler_.blocks())) {
    std::vector<std::size_t> idx(range.dim);
    for (std::size_t i = 0; i < range.dim; ++i) idx[i] = range.offset + i;
    const QMatrix V = QMatrix::identity(n).select_columns(idx);
    const ClassNilpotent cn = class_nilpotent(restrict_pencil(sampler_.pencil(), V), range.eigenvalue);
    Ntot.set_block(range.offset, range.offset, cn.N);
    QMatrix proj(n, n);
    for (auto i : idx) proj(i, i) = 1;
    operators_.push_back(std::move(proj));
  }
  operators_.push_back(std::move(Ntot));
}

InvarianceVerdict InvarianceOracle::check(const Subspace& W) const {
  InvarianceVerdict v;
  const std::size_t n = sampler_.pencil().n();
  if (W.ambient() != n) throw_precondition("ShapeMismatch", "subspace ambient dimension differs from the pencil");
  if (W.dim() == 0 || W.dim() == n) return v;
  const QMatrix ann = W.annihilator();
  for (std::size_t i = 0; i < autos_.size(); ++i) {
    if (!(ann * (autos_[i] * W.basis())).is_zero()) {
      v.invariant = false;
      v.witness = autos_[i];
      v.witness_trial = i;
      v.reason = "automorphism moves the subspace";
      return v;
    }
  }
  for (const auto& op : operators_) {
    if (!(ann * (op * W.basis())).is_zero()) {
      v.invariant = false;
      v.reason = "not stable under the recursion operator";
      return v;
    }
  }
  return v;
}

InvarianceVerdict is_invariant(const Subspace& W, const JKDecomposition& d, std::size_t trials, std::uint64_t seed) {
  return InvarianceOracle(d.invariants.blocks, trials, seed).check(W);
}

// ---------------------------------------------------------------------------
// Quadratic classes

ComplexStructure complex_structure(const SkewPencil& component) {
  const QMatrix P = recursion_operator(component);
  const auto fs = factor_rational(matrix_char_poly(P));
  if (fs.size() != 1 || fs[0].factor.degree() != 2) {
    throw_precondition("NotQuadraticComponent", "characteristic polynomial is not a power of one quadratic factor");
  }
  const EigenvalueClass cls = EigenvalueClass::irreducible(fs[0].factor);
  if (sgn(cls.beta_squared()) <= 0) {
    throw_precondition("NotQuadraticComponent", "factor " + cls.label() + " has real roots");
  }
  const auto beta = cls.beta();
  if (!beta) {
    throw_precondition("IrrationalBeta", "beta^2 = " + to_string(cls.beta_squared()) + " is not a rational square");
  }
  const std::size_t n = component.n();
  const QMatrix S = semisimple_part(P, cls.polynomial());
  return {(S - QMatrix::identity(n) * cls.alpha()) * (1 / *beta), cls};
}

ComplexPencil complexify(const SkewPencil& component, const ComplexStructure& J) {
  return {component.A, -(component.A * J.J), component.B, -(component.B * J.J)};
}

namespace {

std::vector<QVector> complex_basis(const QMatrix& J) {
  const std::size_t n = J.rows();
  std::vector<QVector> chosen, span;
  for (std::size_t i = 0; i < n && 2 * chosen.size() < n; ++i) {
    QVector e(n);
    e[i] = 1;
    span.push_back(e);
    if (rank(QMatrix::from_columns(n, span)) == 2 * chosen.size() + 1) {
      span.push_back(J.apply(e));
      chosen.push_back(std::move(e));
    } else {
      span.pop_back();
    }
  }
  return chosen;
}

}  // namespace

std::vector<std::size_t> complex_jordan_sizes(const SkewPencil& component, const ComplexStructure& J) {
  const auto basis = complex_basis(J.J);
  const std::size_t h = basis.size();
  using CMatrix = Matrix<GaussianRational>;
  CMatrix GA(h, h), GB(h, h);
  for (std::size_t a = 0; a < h; ++a)
    for (std::size_t b = 0; b < h; ++b) {
      const QVector jb = J.J.apply(basis[b]);
      GA(a, b) = GaussianRational(bilinear(component.A, basis[a], basis[b]), -bilinear(component.A, basis[a], jb));
      GB(a, b) = GaussianRational(bilinear(component.B, basis[a], basis[b]), -bilinear(component.B, basis[a], jb));
    }
  auto inv = inverse(GB);
  if (!inv) throw_precondition("DegenerateB", "complexified B is degenerate");
  const CMatrix P = *inv * GA;
  const auto beta = *J.eigenvalue.beta();
  GaussianRational lambda(J.eigenvalue.alpha(), beta);
  CMatrix N = P - CMatrix::identity(h) * lambda;
  if (rank(N) == h) N = P - CMatrix::identity(h) * lambda.conj();
  std::vector<long> r{static_cast<long>(h)};
  CMatrix Nj = CMatrix::identity(h);
  for (std::size_t j = 1; j <= h + 1; ++j) {
    Nj = Nj * N;
    r.push_back(static_cast<long>(rank(Nj)));
  }
  std::vector<std::size_t> sizes;
  for (std::size_t k = h; k >= 1; --k) {
    const long cells = r[k - 1] - 2 * r[k] + r[k + 1];
    if (cells % 2 != 0) throw_internal("OddCellCount", "complexified cell count is odd");
    for (long c = 0; c < cells / 2; ++c) sizes.push_back(k);
  }
  return sizes;
}

InvarianceVerdict real_invariance_check(const Subspace& W, const SkewPencil& component, const ComplexStructure& J,
                                        std::size_t trials, std::uint64_t seed) {
  InvarianceVerdict v;
  if (W.dim() > 0 && !W.contains(apply(J.J, W))) {
    v.invariant = false;
    v.reason = "not J-invariant";
    return v;
  }
  const JKDecomposition d = jk_basis(component);
  const QMatrix Cinv = *inverse(d.C);
  const Subspace Wc = W.dim() == 0 ? Subspace(W.ambient()) : apply(Cinv, W);
  v = InvarianceOracle(d.invariants.blocks, trials, seed).check(Wc);
  if (v.witness) v.witness = d.C * *v.witness * Cinv;
  return v;
}

}  // namespace jkp
