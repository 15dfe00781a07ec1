#include "jkpencil/serialize.hpp"

#include <iomanip>
#include <sstream>

#include "jkpencil/error.hpp"

namespace jkp {

namespace {

Rational entry_from_json(const Json& e, const std::string& field) {
  if (e.is_number_integer()) return Rational(e.get<long>());
  if (e.is_string()) {
    try {
      return parse_rational(e.get<std::string>());
    } catch (const Error& err) {
      throw_malformed("BadRational", field + ": " + err.what());
    }
  }
  throw_malformed("BadRational", field + ": expected a rational string or an integer");
}

int sign_at_infinity(const UPoly& p, bool positive) {
  if (p.is_zero()) return 0;
  const int s = sgn(p.leading());
  return (positive || p.degree() % 2 == 0) ? s : -s;
}

std::size_t sign_changes(const std::vector<int>& signs) {
  std::size_t changes = 0;
  int last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

Json factor_eigenvalue(const EigenvalueClass& c) {
  Json e;
  e["minimal_polynomial"] = c.polynomial().to_string();
  return e;
}

}  // namespace

QMatrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw_malformed("BadMatrix", field + ": expected an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : (j[0].is_array() ? j[0].size() : 0);
  QMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string row_field = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != cols) {
      throw_malformed("BadMatrix", row_field + ": expected a row of length " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = entry_from_json(j[i][c], row_field + "[" + std::to_string(c) + "]");
  }
  return m;
}

Json matrix_to_json(const QMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m(i, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

SkewPencil pencil_from_json(const Json& j) {
  if (!j.is_object()) throw_malformed("BadPencil", "top level: expected an object");
  for (const char* key : {"n", "A", "B"})
    if (!j.contains(key)) throw_malformed("BadPencil", std::string("missing field \"") + key + "\"");
  if (!j["n"].is_number_integer() || j["n"].get<long>() < 0) {
    throw_malformed("BadPencil", "n: expected a non-negative integer");
  }
  const auto n = static_cast<std::size_t>(j["n"].get<long>());
  QMatrix A = matrix_from_json(j["A"], "A");
  QMatrix B = matrix_from_json(j["B"], "B");
  for (const auto& [name, m] : {std::pair<const char*, const QMatrix*>{"A", &A}, {"B", &B}}) {
    if (m->rows() != n || m->cols() != n) {
      throw_malformed("BadPencil", std::string(name) + ": expected " + std::to_string(n) + " x " + std::to_string(n));
    }
  }
  return make_pencil(std::move(A), std::move(B));
}

Json pencil_to_json(const SkewPencil& p) {
  Json j;
  j["n"] = p.n();
  j["A"] = matrix_to_json(p.A);
  j["B"] = matrix_to_json(p.B);
  return j;
}

std::size_t count_real_roots(const UPoly& f) {
  if (f.degree() <= 0) return 0;
  std::vector<UPoly> seq{f, f.derivative()};
  while (!seq.back().is_zero() && seq.back().degree() > 0) {
    const UPoly r = -(seq[seq.size() - 2] % seq.back());
    if (r.is_zero()) break;
    seq.push_back(r);
  }
  std::vector<int> neg, pos;
  for (const auto& p : seq) {
    neg.push_back(sign_at_infinity(p, false));
    pos.push_back(sign_at_infinity(p, true));
  }
  return sign_changes(neg) - sign_changes(pos);
}

Json blocks_to_json(const std::vector<JKBlock>& blocks, ReportMode mode) {
  Json out = Json::array();
  for (const auto& b : blocks) {
    if (!b.is_jordan()) {
      out.push_back({{"kind", "kronecker"}, {"index", b.size}});
      continue;
    }
    const auto& c = b.eigenvalue;
    if (!c.is_irreducible()) {
      out.push_back({{"kind", "jordan"}, {"eigenvalue", c.label()}, {"size", b.size}});
      continue;
    }
    const auto deg = static_cast<std::size_t>(c.degree());
    if (mode == ReportMode::Complex) {
      for (std::size_t r = 1; r <= deg; ++r) {
        Json e = factor_eigenvalue(c);
        e["root"] = r;
        out.push_back({{"kind", "jordan"}, {"eigenvalue", e}, {"size", b.size}});
      }
      continue;
    }
    const std::size_t real = count_real_roots(c.polynomial());
    for (std::size_t r = 1; r <= real; ++r) {
      Json e = factor_eigenvalue(c);
      e["real_root"] = r;
      out.push_back({{"kind", "jordan"}, {"eigenvalue", e}, {"size", b.size}, {"conjugate_free", true}});
    }
    for (std::size_t r = 1; r <= (deg - real) / 2; ++r) {
      Json e = factor_eigenvalue(c);
      e["complex_pair"] = r;
      if (c.is_quadratic()) {
        e["alpha"] = to_string(c.alpha());
        e["beta_squared"] = to_string(c.beta_squared());
      }
      out.push_back({{"kind", "real_jordan"}, {"eigenvalue", e}, {"size", b.size}});
    }
  }
  return out;
}

Json jk_report(const SkewPencil& p, ReportMode mode, bool with_basis) {
  const JKInvariants inv = jk_invariants(p);
  Json r;
  r["blocks"] = blocks_to_json(inv.blocks, mode);
  r["realizable"] = inv.realizable();
  r["dimension"] = p.n();
  if (with_basis && inv.realizable()) {
    const JKDecomposition d = jk_basis(p);
    r["basis"] = matrix_to_json(d.C);
    r["verified"] = verify_canonical(d, p);
  }
  return r;
}

std::string jk_report_text(const Json& report) {
  std::ostringstream out;
  out << "dimension  " << report["dimension"].get<std::size_t>() << "\n";
  out << "realizable " << (report["realizable"].get<bool>() ? "yes" : "no") << "\n";
  out << "blocks\n";
  for (const auto& b : report["blocks"]) {
    const std::string kind = b["kind"];
    out << "  " << std::left << std::setw(12) << kind;
    if (kind == "kronecker") {
      out << "index " << b["index"].get<std::size_t>() << "\n";
      continue;
    }
    std::string eig;
    if (b["eigenvalue"].is_string()) {
      eig = b["eigenvalue"].get<std::string>();
    } else {
      const auto& e = b["eigenvalue"];
      eig = e["minimal_polynomial"].get<std::string>();
      for (const char* key : {"root", "real_root", "complex_pair"})
        if (e.contains(key)) eig += std::string(" ") + key + " " + std::to_string(e[key].get<std::size_t>());
    }
    out << "eigenvalue " << std::setw(24) << eig << " size " << b["size"].get<std::size_t>() << "\n";
  }
  if (report.contains("basis")) {
    out << "basis (columns)" << (report["verified"].get<bool>() ? ", verified" : ", NOT verified") << "\n";
    for (const auto& row : report["basis"]) {
      out << " ";
      for (const auto& e : row) out << " " << std::right << std::setw(6) << e.get<std::string>();
      out << "\n";
    }
  }
  return out.str();
}

std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& what) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw_malformed("BadList", what + ": empty entry in \"" + text + "\"");
    item = item.substr(b, e - b + 1);
    if (item.find_first_not_of("0123456789") != std::string::npos || item.size() > 9) {
      throw_malformed("BadList", what + ": \"" + item + "\" is not a natural number");
    }
    out.push_back(std::stoul(item));
  }
  if (out.empty() || text.back() == ',') throw_malformed("BadList", what + ": empty entry in \"" + text + "\"");
  return out;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace jkp
