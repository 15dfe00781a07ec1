#include "jkpencil/acceptance.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <functional>
#include <iomanip>
#include <mutex>
#include <sstream>

#include "jkpencil/error.hpp"
#include "jkpencil/generators.hpp"
#include "jkpencil/geometry.hpp"
#include "jkpencil/invsub.hpp"
#include "jkpencil/parallel.hpp"
#include "jkpencil/turiel.hpp"

namespace jkp {

namespace {

// Collects the first few failure descriptions from worker threads.
class FailureLog {
 public:
  void add(const std::string& msg) {
    std::lock_guard<std::mutex> lock(m_);
    ++count_;
    if (first_.size() < 3) first_.push_back(msg);
  }
  std::size_t count() const { return count_; }
  std::string summary() const {
    std::string s;
    for (const auto& f : first_) s += (s.empty() ? "" : "; ") + f;
    return s;
  }

 private:
  std::mutex m_;
  std::size_t count_ = 0;
  std::vector<std::string> first_;
};

std::string describe(const std::vector<JKBlock>& blocks) {
  std::ostringstream s;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    s << (i ? " + " : "");
    if (b.is_jordan()) {
      s << "J" << b.size << "(" << b.eigenvalue.label() << ")";
    } else {
      s << "K" << b.size;
    }
  }
  return s.str();
}

std::string tuple_text(const HeightTuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

// Canonical skew pencil moved by a random unimodular congruence.
SkewPencil disguised(const std::vector<JKBlock>& blocks, Rng& rng) {
  const SkewPencil c = canonical_pencil(blocks);
  return congruence(c, random_unimodular(c.n(), rng));
}

void roundtrip(const AcceptanceOptions& opt, CriterionResult& c1, CriterionResult& c2) {
  AssemblyOptions a;
  a.max_dim = opt.roundtrip_max_dim;
  a.max_jordan = 3;
  a.max_kronecker = 2;
  a.eig_lo = -2;
  a.eig_hi = 3;
  a.allow_infinity = false;
  FailureLog inv_fail, basis_fail;
  std::atomic<std::size_t> realizable{0};
  parallel_for(opt.roundtrip_cases, [&](std::size_t i) {
    Rng rng(split_seed(opt.seed, 1000 + i));
    const auto blocks = random_blocks(rng, a);
    const SkewPencil p = disguised(blocks, rng);
    try {
      const auto inv = jk_invariants(p);
      if (inv.blocks != blocks) inv_fail.add("case " + std::to_string(i) + " " + describe(blocks) + " -> " + describe(inv.blocks));
      if (!inv.realizable()) return;
      ++realizable;
      const auto d = jk_basis(p);
      if (!verify_canonical(d, p)) basis_fail.add("case " + std::to_string(i) + " " + describe(blocks));
    } catch (const std::exception& e) {
      inv_fail.add("case " + std::to_string(i) + " threw " + e.what());
    }
  });
  const std::size_t n = opt.roundtrip_cases;
  c1.passed = inv_fail.count() == 0 && n >= 1;
  c1.detail = std::to_string(n - inv_fail.count()) + "/" + std::to_string(n) + " multisets recovered, dim <= " +
              std::to_string(opt.roundtrip_max_dim);
  if (inv_fail.count()) c1.detail += "; " + inv_fail.summary();
  c2.passed = basis_fail.count() == 0 && inv_fail.count() == 0;
  c2.detail = std::to_string(realizable.load() - basis_fail.count()) + "/" + std::to_string(realizable.load()) +
              " realizable cases verified bit-exactly";
  if (basis_fail.count()) c2.detail += "; " + basis_fail.summary();
}

// Every multiset of Jordan sizes with sum l_i k_i <= half_dim.
std::vector<HeightProfile> all_profiles(std::size_t half_dim) {
  std::vector<HeightProfile> out;
  std::vector<std::size_t> parts;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t left, std::size_t max_part) {
    if (!parts.empty()) {
      HeightProfile h;
      for (auto p : parts) {
        if (!h.heights.empty() && h.heights.back() == p) {
          ++h.mults.back();
        } else {
          h.heights.push_back(p);
          h.mults.push_back(1);
        }
      }
      out.push_back(h);
    }
    for (std::size_t p = std::min(left, max_part); p >= 1; --p) {
      parts.push_back(p);
      rec(left - p, p);
      parts.pop_back();
    }
  };
  rec(half_dim, half_dim);
  return out;
}

CriterionResult lattice(const AcceptanceOptions& opt) {
  CriterionResult r;
  const auto profiles = all_profiles(opt.lattice_max_dim / 2);
  FailureLog fail;
  std::atomic<std::size_t> subspaces{0}, refuted{0};
  parallel_for(profiles.size(), [&](std::size_t i) {
    const HeightProfile& h = profiles[i];
    const auto blocks = profile_blocks(h);
    const std::string name = "profile " + describe(blocks);
    const auto tuples = enumerate_invariant_subspaces(h);
    if (tuples.size() != invariant_subspace_count(h)) fail.add(name + ": count differs from enumeration");
    const SkewPencil can = canonical_pencil(blocks);
    const JKDecomposition d{jk_invariants(can), QMatrix::identity(can.n())};
    const InvarianceOracle oracle(blocks, opt.trials, split_seed(opt.seed, 3000 + i));
    for (const auto& t : tuples) {
      const Subspace W = subspace_from_tuple(d, t);
      if (!oracle.check(W).invariant) fail.add(name + " " + tuple_text(t) + " rejected");
      ++subspaces;
    }
    if (h.dimension() > opt.violating_max_dim) return;
    for (const auto& t : violating_tuples(h)) {
      const Subspace W = height_sum_subspace(blocks, t);
      const auto v = oracle.check(W);
      // The witness is checked independently of the oracle.
      const bool ok = !v.invariant && v.witness && v.witness->transpose() * can.A * *v.witness == can.A &&
                      v.witness->transpose() * can.B * *v.witness == can.B && !W.contains(apply(*v.witness, W));
      if (ok) {
        ++refuted;
      } else {
        fail.add(name + " violating " + tuple_text(t) + " not refuted by an automorphism");
      }
    }
  });
  r.passed = fail.count() == 0;
  r.detail = std::to_string(profiles.size()) + " profiles (dim <= " + std::to_string(opt.lattice_max_dim) + "), " +
             std::to_string(subspaces.load()) + " subspaces invariant-consistent over " + std::to_string(opt.trials) +
             " trials, " + std::to_string(refuted.load()) + " violating tuples (dim <= " +
             std::to_string(opt.violating_max_dim) + ") refuted with witnesses";
  if (fail.count()) r.detail += "; " + std::to_string(fail.count()) + " failures: " + fail.summary();
  return r;
}

CriterionResult complexification(const AcceptanceOptions& opt) {
  CriterionResult r;
  FailureLog fail;
  parallel_for(opt.quadratic_cases, [&](std::size_t i) {
    Rng rng(split_seed(opt.seed, 5000 + i));
    const long a = std::uniform_int_distribution<long>(-2, 2)(rng);
    const long b = std::uniform_int_distribution<long>(1, 3)(rng);
    const auto cls = EigenvalueClass::irreducible(UPoly({a * a + b * b, -2 * a, 1}));
    std::vector<JKBlock> blocks;
    std::size_t dim = 0;
    while (true) {
      const std::size_t room = (opt.quadratic_max_dim - dim) / 4;
      if (room == 0) break;
      const std::size_t k = std::uniform_int_distribution<std::size_t>(1, room)(rng);
      blocks.push_back(JKBlock::jordan(cls, k));
      dim += 4 * k;
      if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) break;
    }
    sort_blocks(blocks);
    const SkewPencil p = disguised(blocks, rng);
    const std::string name = "case " + std::to_string(i) + " " + describe(blocks);
    try {
      const auto J = complex_structure(p);
      const QMatrix E = QMatrix::identity(p.n());
      const QMatrix P = recursion_operator(p);
      if (!(J.J * J.J == -E)) fail.add(name + ": J^2 != -E");
      if (!(J.J.transpose() * p.A == p.A * J.J) || !(J.J.transpose() * p.B == p.B * J.J)) {
        fail.add(name + ": J not self-adjoint");
      }
      if (!(J.J * P == P * J.J)) fail.add(name + ": JP != PJ");
      std::vector<std::size_t> sizes;
      for (const auto& blk : blocks) sizes.push_back(blk.size);
      if (complex_jordan_sizes(p, J) != sizes) fail.add(name + ": complexified sizes differ");
    } catch (const std::exception& e) {
      fail.add(name + " threw " + e.what());
    }
  });
  r.passed = fail.count() == 0 && opt.quadratic_cases >= 1;
  r.detail = std::to_string(opt.quadratic_cases - fail.count()) + "/" + std::to_string(opt.quadratic_cases) +
             " quadratic instances (dim <= " + std::to_string(opt.quadratic_max_dim) + ") exact";
  if (fail.count()) r.detail += "; " + fail.summary();
  return r;
}

CriterionResult turiel_identities(const AcceptanceOptions& opt) {
  CriterionResult r;
  const auto sigs = TurielSignature::all(opt.signature_max_n, opt.signature_max_k);
  FailureLog fail;
  parallel_for(sigs.size(), [&](std::size_t i) {
    const auto f = forms_check(sigs[i]);
    const auto fr = frame_check(sigs[i]);
    const std::string name = "signature " + sigs[i].to_string();
    if (!f.compatibility.all()) fail.add(name + ": forms not compatible");
    if (!f.endomorphism_matches) fail.add(name + ": endomorphism field differs");
    if (!f.nil_recurrences) fail.add(name + ": nilpotent recurrences fail");
    if (!fr.gram0 || !fr.gram1) fail.add(name + ": frame Gram matrices not canonical");
    if (!fr.recurrences) fail.add(name + ": frame recurrences fail");
    if (!fr.gamma1_zero) fail.add(name + ": gamma_1 != 0");
  });
  r.passed = fail.count() == 0;
  r.detail = std::to_string(sigs.size()) + " signatures (n <= " + std::to_string(opt.signature_max_n) +
             ", k_i <= " + std::to_string(opt.signature_max_k) + "): closedness, nondegeneracy, N_P = 0, " +
             "endomorphism field, frame Gram matrices and gamma_1 = 0";
  if (fail.count()) r.detail += "; " + fail.summary();
  return r;
}

CriterionResult main_theorem(const AcceptanceOptions& opt) {
  CriterionResult r;
  const auto sigs = TurielSignature::all(opt.signature_max_n, opt.signature_max_k);
  struct Job {
    std::size_t sig;
    HeightTuple tuple;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < sigs.size(); ++i)
    for (const auto& t : enumerate_invariant_subspaces(sigs[i].profile())) jobs.push_back({i, t});
  FailureLog fail;
  std::atomic<std::size_t> non_integrable{0}, witnesses{0};
  parallel_for(jobs.size() + sigs.size(), [&](std::size_t j) {
    if (j >= jobs.size()) {
      const auto& s = sigs[j - jobs.size()];
      const auto im = ker_im_distribution(s, s.dimension(), 1);
      if (!involutivity_check(im).involutive) fail.add("signature " + s.to_string() + ": Im N not involutive");
      return;
    }
    const auto& s = sigs[jobs[j].sig];
    const auto v = integrability_verdict(s, jobs[j].tuple);
    if (!v.computed) ++non_integrable;
    if (v.witness && v.witness_matches) ++witnesses;
    if (!v.agrees()) {
      fail.add("signature " + s.to_string() + " tuple " + tuple_text(jobs[j].tuple) + ": predicted " +
               (v.predicted ? "integrable" : "non-integrable") + ", computed " +
               (v.computed ? "integrable" : "non-integrable") + (v.witness_matches ? "" : ", witness mismatch"));
    }
  });
  r.passed = fail.count() == 0;
  r.detail = std::to_string(jobs.size()) + " distributions over " + std::to_string(sigs.size()) +
             " signatures agree with the prediction; " + std::to_string(non_integrable.load()) +
             " non-integrable, " + std::to_string(witnesses.load()) + " witness brackets matched; Im N involutive";
  if (fail.count()) r.detail += "; " + std::to_string(fail.count()) + " failures: " + fail.summary();
  return r;
}

FlatSpec random_flat(Rng& rng, std::size_t max_dim, const std::vector<Rational>& avoid = {}) {
  AssemblyOptions a;
  a.max_dim = max_dim;
  a.max_jordan = 3;
  a.allow_infinity = false;
  a.allow_kronecker = false;
  while (true) {
    auto blocks = random_blocks(rng, a);
    const bool clash = std::any_of(blocks.begin(), blocks.end(), [&](const JKBlock& b) {
      return std::find(avoid.begin(), avoid.end(), b.eigenvalue.value()) != avoid.end();
    });
    if (!clash) return FlatSpec{blocks};
  }
}

CriterionResult flat_case(const AcceptanceOptions& opt) {
  CriterionResult r;
  FailureLog fail;
  std::atomic<std::size_t> distributions{0};
  parallel_for(opt.flat_cases, [&](std::size_t i) {
    Rng rng(split_seed(opt.seed, 7000 + i));
    const FlatSpec f = random_flat(rng, 8);
    const auto b = build_flat(f);
    const std::string name = "flat " + describe(f.blocks);
    if (!compatibility_check(b.omega0, b.omega1).all()) fail.add(name + ": forms not compatible");
    for (const auto& d : flat_distributions(f, b)) {
      ++distributions;
      if (!involutivity_check(d.fields).involutive) fail.add(name + ": a distribution is not involutive");
    }
  });
  r.passed = fail.count() == 0 && opt.flat_cases >= 1;
  r.detail = std::to_string(opt.flat_cases) + " random flat structures, " + std::to_string(distributions.load()) +
             " invariant distributions, all involutive";
  if (fail.count()) r.detail += "; " + fail.summary();
  return r;
}

struct Component {
  std::string name;
  BiHamiltonian built;
  std::vector<ComponentDistribution> distributions;
  std::vector<Rational> flat_eigenvalues;
};

Component random_component(Rng& rng, const std::string& suffix, const std::vector<Rational>& avoid) {
  static const std::vector<std::vector<std::size_t>> sigs{{1}, {2}, {1, 1}, {2, 1}};
  Component c;
  if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
    const TurielSignature s{sigs[std::uniform_int_distribution<std::size_t>(0, sigs.size() - 1)(rng)]};
    c.name = "turiel(" + s.to_string() + ")";
    c.built = build_normal_form(s, suffix);
    c.distributions = turiel_component_distributions(s, c.built);
  } else {
    const FlatSpec f = random_flat(rng, 4, avoid);
    c.name = "flat " + describe(f.blocks);
    c.built = build_flat(f, suffix);
    c.distributions = flat_component_distributions(f, c.built);
    for (const auto& b : f.blocks) c.flat_eigenvalues.push_back(b.eigenvalue.value());
  }
  return c;
}

JKInvariants invariants_somewhere(const BiHamiltonian& b, const std::vector<Rational>& point) {
  return jk_invariants_at_point(b.omega0, b.omega1, point);
}

CriterionResult products(const AcceptanceOptions& opt) {
  CriterionResult r;
  FailureLog fail;
  std::atomic<std::size_t> rows{0}, points{0};
  for (std::size_t i = 0; i < opt.product_cases; ++i) {
    Rng rng(split_seed(opt.seed, 9000 + i));
    const Component a = random_component(rng, "_a", {});
    const Component b = random_component(rng, "_b", a.flat_eigenvalues);
    const std::string name = a.name + " x " + b.name;
    try {
      const ProductBuild p = product_build({a.built, b.built});
      const std::size_t na = a.built.chart.size();
      for (int k = 0; k < 3;) {
        const auto pt = random_point(rng, p.structure.chart.size());
        try {
          auto expect = invariants_somewhere(a.built, {pt.begin(), pt.begin() + static_cast<long>(na)}).blocks;
          const auto rest = invariants_somewhere(b.built, {pt.begin() + static_cast<long>(na), pt.end()}).blocks;
          expect.insert(expect.end(), rest.begin(), rest.end());
          sort_blocks(expect);
          if (invariants_somewhere(p.structure, pt).blocks != expect) fail.add(name + ": JK invariants are not the union");
          ++points;
          ++k;
        } catch (const Error& e) {
          if (e.code() != "PoleAtPoint") throw;
        }
      }
      for (const auto& row : product_verdicts(p, {a.distributions, b.distributions})) {
        ++rows;
        if (!row.agrees()) fail.add(name + " " + row.labels[0] + " x " + row.labels[1] + ": verdict is not the conjunction");
      }
    } catch (const std::exception& e) {
      fail.add(name + " threw " + e.what());
    }
  }
  r.passed = fail.count() == 0 && opt.product_cases >= 1;
  r.detail = std::to_string(opt.product_cases) + " two-component products, " + std::to_string(points.load()) +
             " points with JK union, " + std::to_string(rows.load()) + " product distributions equal to the conjunction";
  if (fail.count()) r.detail += "; " + fail.summary();
  return r;
}

VectorField random_field(Rng& rng, const Chart& c, unsigned deg) {
  VectorField X = VectorField::zero(c);
  for (auto& f : X.components) f = RatFunc(random_polynomial(rng, c.size(), deg, 3));
  return X;
}

CriterionResult geometry_properties(const AcceptanceOptions& opt) {
  CriterionResult r;
  FailureLog fail;
  const Chart c4({"a", "b", "c", "d"});
  const Chart c3({"a", "b", "c"});
  std::atomic<std::size_t> dd{0}, jacobi{0}, linear{0};
  parallel_for(3 * opt.property_cases, [&](std::size_t j) {
    Rng rng(split_seed(opt.seed, 11000 + j));
    const std::size_t kind = j % 3;
    if (kind == 0) {
      // Alternate between 0-forms and 1-forms; a rational coefficient tests the quotient rule.
      const std::size_t degree = (j / 3) % 2;
      DiffForm w = DiffForm::zero(c4, degree);
      if (degree == 0) {
        Polynomial den = random_polynomial(rng, 4, 1) + Polynomial(4, Rational(5));
        if (den.is_zero()) den = Polynomial(4, Rational(1));
        w = DiffForm::function(c4, RatFunc(random_polynomial(rng, 4, 3)) / RatFunc(den));
      } else {
        for (std::size_t i = 0; i < 4; ++i) w.add_term({i}, RatFunc(random_polynomial(rng, 4, 3)));
      }
      if (exterior_derivative(exterior_derivative(w)).is_zero()) {
        ++dd;
      } else {
        fail.add("d(d w) != 0 for w = " + w.to_string());
      }
    } else if (kind == 1) {
      const auto X = random_field(rng, c3, 2), Y = random_field(rng, c3, 2), Z = random_field(rng, c3, 2);
      const auto s = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) +
                     lie_bracket(Z, lie_bracket(X, Y));
      if (s.is_zero()) {
        ++jacobi;
      } else {
        fail.add("Jacobi identity fails");
      }
    } else {
      OperatorField P{c3, RMatrix(3, 3)};
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) P.matrix(a, b) = RatFunc(random_polynomial(rng, 3, 2, 2));
      const auto X = random_field(rng, c3, 1), Y = random_field(rng, c3, 1);
      const RatFunc f(random_polynomial(rng, 3, 2, 3));
      const auto N = nijenhuis(P, X, Y);
      if (nijenhuis(P, f * X, Y) == f * N && nijenhuis(P, X, f * Y) == f * N) {
        ++linear;
      } else {
        fail.add("N_P is not function-linear");
      }
    }
  });
  r.passed = fail.count() == 0 && opt.property_cases >= 1;
  r.detail = "d(d w) = 0 on " + std::to_string(dd.load()) + ", Jacobi on " + std::to_string(jacobi.load()) +
             ", N_P linearity on " + std::to_string(linear.load()) + " random instances";
  if (fail.count()) r.detail += "; " + fail.summary();
  return r;
}

double cpu_now() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

}  // namespace

AcceptanceOptions AcceptanceOptions::quick(std::uint64_t seed) {
  AcceptanceOptions o;
  o.seed = seed;
  o.roundtrip_cases = 40;
  o.roundtrip_max_dim = 10;
  o.trials = 40;
  o.lattice_max_dim = 10;
  o.violating_max_dim = 8;
  o.quadratic_cases = 20;
  o.signature_max_n = 2;
  o.signature_max_k = 2;
  o.flat_cases = 10;
  o.product_cases = 5;
  o.property_cases = 50;
  return o;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, const std::vector<int>& which) {
  auto wanted = [&](int id) { return which.empty() || std::find(which.begin(), which.end(), id) != which.end(); };
  std::vector<CriterionResult> out;
  auto timed = [&](auto&& body) {
    const auto w0 = std::chrono::steady_clock::now();
    const double c0 = cpu_now();
    body();
    return std::pair<double, double>{
        std::chrono::duration<double>(std::chrono::steady_clock::now() - w0).count(), cpu_now() - c0};
  };
  auto finish = [&](CriterionResult r, int id, const char* name, std::pair<double, double> t, double limit) {
    r.id = id;
    r.name = name;
    r.wall_seconds = t.first;
    r.cpu_seconds = t.second;
    r.limit_seconds = limit;
    if (limit > 0 && r.cpu_seconds > limit) {
      r.passed = false;
      r.detail += "; over the time budget";
    }
    out.push_back(std::move(r));
  };

  if (wanted(1) || wanted(2)) {
    CriterionResult c1, c2;
    const auto t = timed([&] { roundtrip(opt, c1, c2); });
    if (wanted(1)) finish(c1, 1, "JK roundtrip", t, 60);
    if (wanted(2)) finish(c2, 2, "canonical basis", t, 0);
  }
  struct Entry {
    int id;
    const char* name;
    double limit;
    std::function<CriterionResult(const AcceptanceOptions&)> run;
  };
  const std::vector<Entry> rest{
      {3, "subspace lattice", 120, lattice},
      {4, "complexification", 0, complexification},
      {5, "Turiel identities", 300, turiel_identities},
      {6, "integrability verdicts", 0, main_theorem},
      {7, "flat case", 0, flat_case},
      {8, "product structures", 0, products},
      {9, "geometry kernel properties", 0, geometry_properties},
  };
  for (const auto& e : rest) {
    if (!wanted(e.id)) continue;
    CriterionResult r;
    const auto t = timed([&] {
      try {
        r = e.run(opt);
      } catch (const std::exception& ex) {
        r.passed = false;
        r.detail = std::string("threw ") + ex.what();
      }
    });
    finish(r, e.id, e.name, t, e.limit);
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.passed ? "PASS" : "FAIL") << "  criterion " << r.id << " (" << r.name << "): " << r.detail << " [wall "
    << std::fixed << std::setprecision(2) << r.wall_seconds << " s, cpu " << r.cpu_seconds << " s";
  if (r.limit_seconds > 0) s << ", budget " << std::setprecision(0) << r.limit_seconds << " s";
  s << "]";
  return s.str();
}

}  // namespace jkp
