#include "jkpencil/turiel.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "jkpencil/parallel.hpp"

namespace jkp {

// ---------------------------------------------------------------------------
// Signatures

void TurielSignature::validate() const {
  if (k.empty()) throw_malformed("BadSignature", "signature is empty");
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] == 0) throw_malformed("BadSignature", "entry " + std::to_string(i) + " is zero");
    if (i > 0 && k[i] > k[i - 1]) throw_malformed("BadSignature", "entries must not increase");
  }
}

std::size_t TurielSignature::dimension() const {
  std::size_t d = 2;
  for (auto x : k) d += 2 * x;
  return d;
}

std::vector<std::size_t> TurielSignature::jordan_sizes() const {
  std::vector<std::size_t> out = k;
  out.at(0) += 1;
  return out;
}

HeightProfile TurielSignature::profile() const {
  HeightProfile h;
  for (auto size : jordan_sizes()) {
    if (!h.heights.empty() && h.heights.back() == size) {
      ++h.mults.back();
    } else {
      h.heights.push_back(size);
      h.mults.push_back(1);
    }
  }
  return h;
}

std::string TurielSignature::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
  return s;
}

TurielSignature TurielSignature::parse(const std::string& text) {
  TurielSignature s;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw_malformed("BadSignature", "signature entry '" + item + "' is not a positive integer");
    s.k.push_back(std::stoul(item));
  }
  s.validate();
  return s;
}

std::vector<TurielSignature> TurielSignature::all(std::size_t max_n, std::size_t max_k) {
  std::vector<TurielSignature> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t bound) -> void {
    if (!cur.empty()) out.push_back({cur});
    if (cur.size() == max_n) return;
    for (std::size_t v = 1; v <= bound; ++v) {
      cur.push_back(v);
      self(self, v);
      cur.pop_back();
    }
  };
  rec(rec, max_k);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
  return out;
}

Chart turiel_chart(const TurielSignature& s, const std::string& suffix) {
  s.validate();
  std::vector<std::string> names;
  for (std::size_t b = 1; b <= s.n(); ++b) {
    for (std::size_t i = 1; i <= s.k[b - 1]; ++i) names.push_back("x" + std::to_string(b) + "_" + std::to_string(i) + suffix);
    for (std::size_t i = 1; i <= s.k[b - 1]; ++i) names.push_back("y" + std::to_string(b) + "_" + std::to_string(i) + suffix);
  }
  names.push_back("z" + suffix);
  names.push_back("lambda" + suffix);
  return Chart(std::move(names));
}

// ---------------------------------------------------------------------------
// Coordinate access with the convention x_s^i = y_s^i = 0 outside 1..k_s.

namespace {

RatFunc half(long num) { return RatFunc(make_rational(num, 2)); }
RatFunc delta(long a, long b) { return RatFunc(a == b ? 1 : 0); }

class Coords {
 public:
  Coords(const TurielSignature& s, const std::string& suffix) : sig_(s), chart_(turiel_chart(s, suffix)) {
    std::size_t off = 0;
    for (auto k : s.k) {
      start_.push_back(off);
      off += 2 * k;
    }
  }

  const Chart& chart() const { return chart_; }
  long k(std::size_t s) const { return static_cast<long>(sig_.k.at(s - 1)); }
  std::size_t n() const { return sig_.n(); }
  std::size_t z_index() const { return chart_.size() - 2; }
  std::size_t l_index() const { return chart_.size() - 1; }

  std::optional<std::size_t> xi(std::size_t s, long i) const {
    if (s < 1 || s > n() || i < 1 || i > k(s)) return std::nullopt;
    return start_[s - 1] + static_cast<std::size_t>(i - 1);
  }
  std::optional<std::size_t> yi(std::size_t s, long i) const {
    if (s < 1 || s > n() || i < 1 || i > k(s)) return std::nullopt;
    return start_[s - 1] + static_cast<std::size_t>(k(s) + i - 1);
  }

  RatFunc x(std::size_t s, long i) const { return var(xi(s, i)); }
  RatFunc y(std::size_t s, long i) const { return var(yi(s, i)); }
  RatFunc lambda() const { return chart_.coordinate(l_index()); }
  // x_1^1 / 2 + 1
  RatFunc D() const { return half(1) * x(1, 1) + RatFunc(1); }

  VectorField dx(std::size_t s, long i) const { return field(xi(s, i)); }
  VectorField dy(std::size_t s, long i) const { return field(yi(s, i)); }
  VectorField dz() const { return VectorField::coordinate(chart_, z_index()); }
  VectorField dl() const { return VectorField::coordinate(chart_, l_index()); }
  VectorField zero() const { return VectorField::zero(chart_); }

 private:
  RatFunc var(std::optional<std::size_t> i) const { return i ? chart_.coordinate(*i) : RatFunc(); }
  VectorField field(std::optional<std::size_t> i) const {
    return i ? VectorField::coordinate(chart_, *i) : VectorField::zero(chart_);
  }

  TurielSignature sig_;
  Chart chart_;
  std::vector<std::size_t> start_;
};

// (k_s + 1/2) y_s^{k_s} / D and (x_s^1 / 2) / D, the corrections of block s.
RatFunc c_coef(const Coords& c, std::size_t s) { return half(2 * c.k(s) + 1) * c.y(s, c.k(s)) / c.D(); }
RatFunc d_coef(const Coords& c, std::size_t s) { return half(1) * c.x(s, 1) / c.D(); }

void add_column(RMatrix& M, std::size_t col, const VectorField& v) {
  for (std::size_t i = 0; i < M.rows(); ++i)
    if (!v.components[i].is_zero()) M(i, col) += v.components[i];
}

}  // namespace

// ---------------------------------------------------------------------------
// Normal form and operator field

BiHamiltonian build_normal_form(const TurielSignature& s, const std::string& suffix) {
  const Coords c(s, suffix);
  const Chart& ch = c.chart();
  DiffForm w0 = DiffForm::zero(ch, 2);
  for (std::size_t b = 1; b <= c.n(); ++b)
    for (long i = 1; i <= c.k(b); ++i) w0.add_term({*c.xi(b, i), *c.yi(b, i)}, RatFunc(1));
  w0.add_term({c.z_index(), c.l_index()}, RatFunc(1));

  DiffForm w1 = c.lambda() * w0;
  const std::size_t l = c.l_index();
  for (std::size_t b = 1; b <= c.n(); ++b) {
    for (long i = 1; i < c.k(b); ++i) w1.add_term({*c.xi(b, i), *c.yi(b, i + 1)}, RatFunc(1));
    // alpha ^ dlambda
    for (long i = 1; i <= c.k(b); ++i) {
      w1.add_term({*c.xi(b, i), l}, half(2 * i + 1) * c.y(b, i));
      w1.add_term({*c.yi(b, i), l}, half(2 * i - 1) * c.x(b, i));
    }
  }
  w1.add_term({*c.yi(1, 1), l}, RatFunc(1));
  return {ch, std::move(w0), std::move(w1)};
}

OperatorField endomorphism_field(const TurielSignature& s, const std::string& suffix) {
  const Coords c(s, suffix);
  OperatorField P = OperatorField::scalar(c.chart(), c.lambda());
  VectorField lam_col = c.zero();
  for (std::size_t b = 1; b <= c.n(); ++b) {
    const long k = c.k(b);
    for (long j = 1; j <= k; ++j) {
      add_column(P.matrix, *c.xi(b, j), c.dx(b, j + 1) + half(2 * j + 1) * c.y(b, j) * c.dz());
      add_column(P.matrix, *c.yi(b, k + 1 - j),
                 c.dy(b, k - j) + half(2 * k + 1 - 2 * j) * c.x(b, k - j + 1) * c.dz() +
                     delta(static_cast<long>(b), 1) * delta(j, k) * c.dz());
      lam_col -= (half(2 * j - 1) * c.x(b, j) + delta(static_cast<long>(b), 1) * delta(j, 1)) * c.dx(b, j);
      lam_col += half(2 * j + 1) * c.y(b, j) * c.dy(b, j);
    }
  }
  add_column(P.matrix, c.l_index(), lam_col);
  return P;
}

// ---------------------------------------------------------------------------
// Frames

std::vector<JKBlock> frame_blocks(const TurielSignature& s) {
  std::vector<JKBlock> out;
  for (auto size : s.jordan_sizes()) out.push_back(JKBlock::jordan(EigenvalueClass::finite(0), size));
  return out;
}

namespace {

RatFunc gamma_coef(const Coords& c, long i) {
  RatFunc g;
  for (std::size_t b = 1; b <= c.n(); ++b) {
    const long k = c.k(b);
    g += (half(1) * c.x(b, 1) + delta(static_cast<long>(b), 1)) * half(2 * i - 1) * c.y(b, i - 1);
    g -= half(2 * k + 1) * c.y(b, k) * half(2 * k - 2 * i + 3) * c.x(b, k - i + 2);
  }
  return g;
}

// Positions of e(s, i) and f(s, i) inside TurielFrame::fields.
std::size_t block_start(const TurielSignature& s, std::size_t b) {
  std::size_t off = 0;
  for (std::size_t t = 1; t < b; ++t) off += t == 1 ? 2 * (s.k[0] + 1) : 2 * s.k[t - 1];
  return off;
}

}  // namespace

const VectorField& TurielFrame::e(std::size_t s, std::size_t i) const {
  const std::size_t start = block_start(signature, s);
  return fields.at(s == 1 ? start + i : start + i - 1);
}

const VectorField& TurielFrame::f(std::size_t s, std::size_t i) const {
  const std::size_t start = block_start(signature, s);
  const std::size_t len = s == 1 ? signature.k[0] + 1 : signature.k[s - 1];
  return fields.at(s == 1 ? start + len + i : start + len + i - 1);
}

RatFunc frame_gamma(const TurielSignature& s, std::size_t i, const std::string& suffix) {
  return gamma_coef(Coords(s, suffix), static_cast<long>(i));
}

TurielFrame frames(const TurielSignature& s, const std::string& suffix) {
  const Coords c(s, suffix);
  const RatFunc D = c.D();
  const long k1 = c.k(1);
  TurielFrame out{s, {}};

  // Largest block: e_1^0..e_1^{k_1}, then f_1^0..f_1^{k_1}.
  VectorField e0 = -1 * c.dl();
  for (std::size_t b = 1; b <= c.n(); ++b)
    for (long j = 1; j <= c.k(b); ++j) {
      e0 -= half(2 * j + 1) * c.x(b, j + 1) * c.dx(b, j);
      e0 += half(2 * j - 1) * c.y(b, j - 1) * c.dy(b, j);
    }
  out.fields.push_back(e0);
  for (long i = 1; i <= k1; ++i) {
    VectorField e = gamma_coef(c, i) * c.dz();
    for (std::size_t b = 1; b <= c.n(); ++b) {
      const long k = c.k(b);
      e += (half(1) * c.x(b, 1) + delta(static_cast<long>(b), 1)) * c.dx(b, i);
      e -= half(2 * k + 1) * c.y(b, k) * c.dy(b, k - i + 1);
    }
    out.fields.push_back(e);
  }
  for (long i = 0; i <= k1; ++i) {
    const RatFunc beta = (half(2 * i + 1) * c.x(1, i + 1) + delta(i, 0)) / D;
    out.fields.push_back(c.dy(1, i) * (RatFunc(1) / D) + beta * c.dz());
  }

  // Smaller blocks. The closed forms are used at every index, including
  // the chain ends e_s^1 and f_s^{k_s}.
  for (std::size_t b = 2; b <= c.n(); ++b) {
    const long k = c.k(b);
    const RatFunc cs = c_coef(c, b), ds = d_coef(c, b);
    for (long i = 1; i <= k; ++i) {
      const RatFunc alpha =
          half(2 * i - 1) * c.y(b, i - 1) - cs * (half(2 * k - 2 * i + 3) * c.x(1, k - i + 2) + delta(i, k + 1));
      out.fields.push_back(c.dx(b, i) - cs * c.dy(1, k - i + 1) + alpha * c.dz());
    }
    for (long i = 1; i <= k; ++i) {
      const RatFunc beta = half(2 * i + 1) * c.x(b, i + 1) - ds * (half(2 * i + 1) * c.x(1, i + 1) + delta(i, 0));
      out.fields.push_back(c.dy(b, i) - ds * c.dy(1, i) + beta * c.dz());
    }
  }
  return out;
}

FrameReport frame_check(const TurielSignature& s) {
  FrameReport r;
  const BiHamiltonian bh = build_normal_form(s);
  const TurielFrame F = frames(s);
  const SkewPencil canon = canonical_pencil(frame_blocks(s));
  const RMatrix B0 = to_rmatrix(canon.B), A0 = to_rmatrix(canon.A);
  const Coords c(s, "");
  const RatFunc lam = c.lambda();

  r.gram0 = gram_matrix(bh.omega0, F.fields) == B0;
  RMatrix expected1 = A0;
  for (std::size_t i = 0; i < B0.rows(); ++i)
    for (std::size_t j = 0; j < B0.cols(); ++j)
      if (!B0(i, j).is_zero()) expected1(i, j) += lam * B0(i, j);
  r.gram1 = gram_matrix(bh.omega1, F.fields) == expected1;

  const OperatorField N = endomorphism_field(s) - OperatorField::scalar(c.chart(), lam);
  bool rec = true;
  for (std::size_t b = 1; b <= s.n(); ++b) {
    const std::size_t lo = b == 1 ? 0 : 1, hi = b == 1 ? s.k[0] : s.k[b - 1];
    for (std::size_t i = lo; i <= hi; ++i) {
      const VectorField Ne = N.apply(F.e(b, i));
      rec = rec && (i < hi ? Ne == F.e(b, i + 1) : Ne.is_zero());
      const VectorField Nf = N.apply(F.f(b, i));
      rec = rec && (i > lo ? Nf == F.f(b, i - 1) : Nf.is_zero());
    }
  }
  r.recurrences = rec;
  r.gamma1_zero = frame_gamma(s, 1).is_zero();
  return r;
}

FormsReport forms_check(const TurielSignature& s) {
  FormsReport r;
  const BiHamiltonian bh = build_normal_form(s);
  r.compatibility = compatibility_check(bh.omega0, bh.omega1);
  const OperatorField P = operator_field(bh.omega0, bh.omega1);
  r.endomorphism_matches = P == endomorphism_field(s);

  const Coords c(s, "");
  const OperatorField N = P - OperatorField::scalar(c.chart(), c.lambda());
  bool ok = N.apply(c.dz()).is_zero();
  VectorField lam_image = c.zero();
  for (std::size_t b = 1; b <= c.n(); ++b) {
    const long k = c.k(b);
    for (long j = 1; j <= k; ++j) {
      ok = ok && N.apply(c.dx(b, j)) == c.dx(b, j + 1) + half(2 * j + 1) * c.y(b, j) * c.dz();
      ok = ok && N.apply(c.dy(b, k + 1 - j)) == c.dy(b, k - j) + half(2 * k + 1 - 2 * j) * c.x(b, k - j + 1) * c.dz() +
                                                   delta(static_cast<long>(b), 1) * delta(j, k) * c.dz();
      lam_image -= (half(2 * j - 1) * c.x(b, j) + delta(static_cast<long>(b), 1) * delta(j, 1)) * c.dx(b, j);
      lam_image += half(2 * j + 1) * c.y(b, j) * c.dy(b, j);
    }
  }
  r.nil_recurrences = ok && N.apply(c.dl()) == lam_image;
  return r;
}

// ---------------------------------------------------------------------------
// Invariant distributions

namespace {

std::size_t height_index(const HeightProfile& h, std::size_t height) {
  return static_cast<std::size_t>(std::find(h.heights.begin(), h.heights.end(), height) - h.heights.begin());
}

// u_s and v_s for block b at level m >= 1.
std::pair<VectorField, VectorField> corrected_pair(const Coords& c, std::size_t b, long m) {
  const long k = c.k(b);
  VectorField u = c.dx(b, k - m + 1) - c_coef(c, b) * c.dy(1, m);
  VectorField v = c.dy(b, m) - d_coef(c, b) * c.dy(1, m);
  return {std::move(u), std::move(v)};
}

}  // namespace

std::vector<VectorField> invariant_distribution(const TurielSignature& s, const HeightTuple& d) {
  const HeightProfile h = s.profile();
  check_tuple(h, d);
  std::vector<VectorField> gens;
  if (d[0] == 0) return gens;
  const Coords c(s, "");
  const TurielFrame F = frames(s);
  const long m1 = static_cast<long>(d[0]) - 1;
  const long k1 = c.k(1);

  gens.push_back(c.dz());
  for (long i = 1; i <= m1; ++i) gens.push_back(c.dy(1, i));
  for (long i = k1; i >= k1 - m1; --i) gens.push_back(F.e(1, static_cast<std::size_t>(i)));

  for (std::size_t b = 2; b <= c.n(); ++b) {
    const long k = c.k(b);
    const long m = static_cast<long>(d[height_index(h, static_cast<std::size_t>(k))]);
    if (m == 0) continue;
    auto [u, v] = corrected_pair(c, b, m);
    for (long i = k; i >= k - m + 2; --i) gens.push_back(c.dx(b, i));
    gens.push_back(std::move(u));
    for (long i = 1; i <= m - 1; ++i) gens.push_back(c.dy(b, i));
    gens.push_back(std::move(v));
  }
  return gens;
}

HeightTuple ker_im_tuple(const TurielSignature& s, std::size_t k, std::size_t l) {
  HeightTuple t;
  for (auto H : s.profile().heights) t.push_back(l >= H ? 0 : std::min(k, H - l));
  return t;
}

std::vector<VectorField> ker_im_distribution(const TurielSignature& s, std::size_t k, std::size_t l) {
  const Coords c(s, "");
  const RMatrix N = (endomorphism_field(s) - OperatorField::scalar(c.chart(), c.lambda())).matrix;
  std::vector<VectorField> out;
  if (k == 0) return out;
  const RMatrix Nl = matrix_power(N, static_cast<unsigned>(l));
  const RMatrix image = Nl.select_columns(rref(Nl).pivots);
  const RMatrix K = kernel(matrix_power(N, static_cast<unsigned>(k)) * image);
  const RMatrix basis = image * K;
  for (std::size_t j = 0; j < basis.cols(); ++j) out.push_back({c.chart(), basis.column(j)});
  return out;
}

bool predicted_integrable(const TurielSignature& s, const HeightTuple& d) {
  const auto heights = s.profile().heights;
  for (std::size_t j = 1; j < heights.size(); ++j) {
    HeightTuple ker;
    for (auto H : heights) ker.push_back(std::min(H, heights[j]));
    if (d == ker) return false;
  }
  return true;
}

VectorField expected_witness(const TurielSignature& s, std::size_t block, std::size_t m) {
  const Coords c(s, "");
  const long k = c.k(block);
  return (delta(static_cast<long>(m), k) * RatFunc(k) / c.D()) * c.dy(1, k);
}

IntegrabilityReport integrability_verdict(const TurielSignature& s, const HeightTuple& d) {
  IntegrabilityReport r;
  const auto gens = invariant_distribution(s, d);
  r.tuple = d;
  r.dimension = gens.size();
  r.predicted = predicted_integrable(s, d);
  const auto v = involutivity_check(gens);
  r.computed = v.involutive;
  r.checker_witness = v.witness;
  if (r.computed) return r;

  const HeightProfile h = s.profile();
  const Coords c(s, "");
  r.witness_matches = false;
  for (std::size_t b = 2; b <= s.n(); ++b) {
    const std::size_t m = d[height_index(h, s.k[b - 1])];
    if (m != s.k[b - 1] || d[0] > m) continue;  // needs m_s = k_s and m_1 < k_s
    auto [u, w] = corrected_pair(c, b, static_cast<long>(m));
    VectorField br = lie_bracket(u, w);
    r.witness_block = b;
    r.witness_matches = br == expected_witness(s, b, m) && !span_contains(gens, br);
    r.witness = std::move(br);
    break;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Flat structures

void FlatSpec::validate() const {
  if (blocks.empty()) throw_malformed("BadFlatSpec", "no blocks");
  for (const auto& b : blocks)
    if (!b.is_jordan() || !b.eigenvalue.is_finite() || b.size == 0)
      throw_malformed("BadFlatSpec", "flat structures take Jordan blocks with rational eigenvalues only");
}

BiHamiltonian build_flat(const FlatSpec& f, const std::string& suffix) {
  f.validate();
  std::vector<std::string> names;
  for (std::size_t b = 1; b <= f.blocks.size(); ++b) {
    const std::size_t k = f.blocks[b - 1].size;
    for (std::size_t i = 1; i <= k; ++i) names.push_back("u" + std::to_string(b) + "_" + std::to_string(i) + suffix);
    for (std::size_t i = 1; i <= k; ++i) names.push_back("w" + std::to_string(b) + "_" + std::to_string(i) + suffix);
  }
  Chart ch(std::move(names));
  const SkewPencil p = canonical_pencil(f.blocks);
  return {ch, DiffForm::from_matrix(ch, to_rmatrix(p.B)), DiffForm::from_matrix(ch, to_rmatrix(p.A))};
}

std::vector<FlatDistribution> flat_distributions(const FlatSpec& f, const BiHamiltonian& bh) {
  f.validate();
  // Group blocks by eigenvalue in order of first appearance.
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> offsets;
  std::size_t off = 0;
  for (std::size_t i = 0; i < f.blocks.size(); ++i) {
    offsets.push_back(off);
    off += f.blocks[i].dimension();
    bool placed = false;
    for (auto& g : groups)
      if (f.blocks[g.front()].eigenvalue == f.blocks[i].eigenvalue) {
        g.push_back(i);
        placed = true;
        break;
      }
    if (!placed) groups.push_back({i});
  }

  struct GroupData {
    std::vector<JKBlock> blocks;
    std::vector<std::size_t> coords;  // global index of each local coordinate
    std::vector<HeightTuple> tuples;
  };
  std::vector<GroupData> data;
  for (const auto& g : groups) {
    GroupData gd;
    for (auto i : g) {
      gd.blocks.push_back(f.blocks[i]);
      for (std::size_t j = 0; j < f.blocks[i].dimension(); ++j) gd.coords.push_back(offsets[i] + j);
    }
    // The height-sum construction expects blocks in descending size.
    std::vector<std::size_t> order(gd.blocks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return gd.blocks[a].size > gd.blocks[b].size; });
    GroupData sorted;
    for (auto i : order) {
      sorted.blocks.push_back(gd.blocks[i]);
      std::size_t start = 0;
      for (std::size_t t = 0; t < i; ++t) start += gd.blocks[t].dimension();
      for (std::size_t j = 0; j < gd.blocks[i].dimension(); ++j) sorted.coords.push_back(gd.coords[start + j]);
    }
    sorted.tuples = enumerate_invariant_subspaces(HeightProfile::from_blocks(sorted.blocks));
    data.push_back(std::move(sorted));
  }

  std::vector<FlatDistribution> out;
  std::vector<std::size_t> pick(data.size(), 0);
  while (true) {
    FlatDistribution fd;
    for (std::size_t g = 0; g < data.size(); ++g) {
      const HeightTuple& t = data[g].tuples[pick[g]];
      fd.tuples.push_back(t);
      const Subspace W = height_sum_subspace(data[g].blocks, t);
      for (std::size_t j = 0; j < W.dim(); ++j) {
        VectorField X = VectorField::zero(bh.chart);
        for (std::size_t i = 0; i < W.ambient(); ++i)
          if (sgn(W.basis()(i, j)) != 0) X.components[data[g].coords[i]] = RatFunc(W.basis()(i, j));
        fd.fields.push_back(std::move(X));
      }
    }
    out.push_back(std::move(fd));
    std::size_t g = 0;
    while (g < data.size() && ++pick[g] == data[g].tuples.size()) pick[g++] = 0;
    if (g == data.size()) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Products

namespace {

DiffForm lift_form(const DiffForm& w, const Chart& target, const std::vector<std::size_t>& map) {
  DiffForm out = DiffForm::zero(target, w.degree);
  for (const auto& [idx, f] : w.coefficients) {
    IndexTuple t;
    for (auto i : idx) t.push_back(map[i]);
    out.add_term(std::move(t), f.remap(target.size(), map));
  }
  return out;
}

// det(t E - P) as a polynomial in the product variables plus t (last),
// scaled by a t-free factor to clear denominators.
Polynomial char_polynomial(const BiHamiltonian& b, const std::vector<std::size_t>& map, std::size_t nvars) {
  const auto coefs = characteristic_coefficients(operator_field(b.omega0, b.omega1));
  Polynomial common(nvars, Rational(1));
  for (const auto& cf : coefs) {
    const Polynomial den = cf.den().remap(nvars, map);
    if (den.is_constant()) continue;
    const Polynomial g = gcd(common, den);
    common = common * *divide_exact(den, g);
  }
  Polynomial chi = Polynomial::zero(nvars);
  for (std::size_t i = 0; i < coefs.size(); ++i) {
    const Polynomial num = coefs[i].num().remap(nvars, map), den = coefs[i].den().remap(nvars, map);
    chi += num * *divide_exact(common, den) * Polynomial::variable(nvars, nvars - 1, static_cast<unsigned>(i));
  }
  return chi;
}

}  // namespace

ProductBuild product_build(const std::vector<BiHamiltonian>& components) {
  if (components.empty()) throw_malformed("EmptyProduct", "product of no components");
  std::vector<std::string> names;
  std::set<std::string> seen;
  ProductBuild out;
  for (const auto& comp : components) {
    out.offsets.push_back(names.size());
    for (const auto& v : comp.chart.variables()) {
      if (!seen.insert(v).second) throw_malformed("NameClash", "variable '" + v + "' appears in two components");
      names.push_back(v);
    }
  }
  const Chart ch(names);
  const std::size_t n = ch.size();

  std::vector<std::vector<std::size_t>> maps;
  for (std::size_t c = 0; c < components.size(); ++c) {
    std::vector<std::size_t> m(components[c].chart.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = out.offsets[c] + i;
    maps.push_back(std::move(m));
  }

  if (components.size() > 1) {
    std::vector<Polynomial> chis(components.size());
    parallel_for(components.size(), [&](std::size_t c) { chis[c] = char_polynomial(components[c], maps[c], n + 1); });
    for (std::size_t a = 0; a < chis.size(); ++a)
      for (std::size_t b = a + 1; b < chis.size(); ++b)
        if (gcd(chis[a], chis[b]).degree_in(n) > 0)
          throw_precondition("NonCoprimeFactors", "characteristic polynomials of components " + std::to_string(a) +
                                                      " and " + std::to_string(b) + " share a factor");
  }

  out.structure.chart = ch;
  out.structure.omega0 = DiffForm::zero(ch, 2);
  out.structure.omega1 = DiffForm::zero(ch, 2);
  for (std::size_t c = 0; c < components.size(); ++c) {
    out.structure.omega0 += lift_form(components[c].omega0, ch, maps[c]);
    out.structure.omega1 += lift_form(components[c].omega1, ch, maps[c]);
  }
  return out;
}

VectorField lift_field(const ProductBuild& p, std::size_t c, const VectorField& X) {
  const Chart& ch = p.structure.chart;
  std::vector<std::size_t> map(X.dimension());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = p.offsets.at(c) + i;
  VectorField out = VectorField::zero(ch);
  for (std::size_t i = 0; i < X.dimension(); ++i) out.components[map[i]] = X.components[i].remap(ch.size(), map);
  return out;
}

}  // namespace jkp

namespace jkp {

std::vector<ComponentDistribution> turiel_component_distributions(const TurielSignature& s,
                                                                  const BiHamiltonian& built) {
  const auto tuples = enumerate_invariant_subspaces(s.profile());
  std::vector<ComponentDistribution> out(tuples.size());
  parallel_for(tuples.size(), [&](std::size_t i) {
    const auto verdict = integrability_verdict(s, tuples[i]);
    ComponentDistribution& d = out[i];
    std::ostringstream label;
    for (std::size_t j = 0; j < tuples[i].size(); ++j) label << (j ? "," : "") << tuples[i][j];
    d.label = label.str();
    for (const auto& X : invariant_distribution(s, tuples[i])) d.fields.push_back(VectorField{built.chart, X.components});
    d.integrable = verdict.computed;
  });
  return out;
}

std::vector<ComponentDistribution> flat_component_distributions(const FlatSpec& f, const BiHamiltonian& built) {
  const auto all = flat_distributions(f, built);
  std::vector<ComponentDistribution> out(all.size());
  parallel_for(all.size(), [&](std::size_t i) {
    std::ostringstream label;
    for (std::size_t c = 0; c < all[i].tuples.size(); ++c) {
      if (c) label << "|";
      for (std::size_t j = 0; j < all[i].tuples[c].size(); ++j) label << (j ? "," : "") << all[i].tuples[c][j];
    }
    out[i].label = label.str();
    out[i].fields = all[i].fields;
    out[i].integrable = involutivity_check(all[i].fields).involutive;
  });
  return out;
}

std::vector<ProductVerdictRow> product_verdicts(const ProductBuild& p,
                                                const std::vector<std::vector<ComponentDistribution>>& parts) {
  if (parts.size() != p.offsets.size()) {
    throw_malformed("ComponentCount", "one distribution list per product component is required");
  }
  std::size_t total = 1;
  for (const auto& part : parts) total *= part.size();
  std::vector<ProductVerdictRow> rows(total);
  parallel_for(total, [&](std::size_t r) {
    // Mixed-radix decoding with the first component varying slowest.
    std::vector<std::size_t> pick(parts.size());
    std::size_t rest = r;
    for (std::size_t c = parts.size(); c-- > 0;) {
      pick[c] = rest % parts[c].size();
      rest /= parts[c].size();
    }
    ProductVerdictRow& row = rows[r];
    std::vector<VectorField> gens;
    for (std::size_t c = 0; c < parts.size(); ++c) {
      const auto& d = parts[c][pick[c]];
      row.labels.push_back(d.label);
      row.conjunction = row.conjunction && d.integrable;
      for (const auto& X : d.fields) gens.push_back(lift_field(p, c, X));
    }
    row.dimension = gens.size();
    row.computed = gens.empty() || involutivity_check(gens).involutive;
  });
  return rows;
}

}  // namespace jkp
