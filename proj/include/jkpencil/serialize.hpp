#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "jkpencil/jk.hpp"

namespace jkp {

using Json = nlohmann::ordered_json;

// {"n": int, "A": [[rational]], "B": [[rational]]}. Entries may be strings
// such as "-3/4" or JSON integers. Throws Malformed naming the field.
SkewPencil pencil_from_json(const Json& j);
Json pencil_to_json(const SkewPencil& p);

Json matrix_to_json(const QMatrix& m);
QMatrix matrix_from_json(const Json& j, const std::string& field);

// Number of real roots of a squarefree polynomial, by Sturm sequences.
std::size_t count_real_roots(const UPoly& f);

// Block list in the CLI schema. Complex mode lists one Jordan block per
// root of an irreducible factor. Real mode lists one block per real root
// and one "real_jordan" block per conjugate pair.
Json blocks_to_json(const std::vector<JKBlock>& blocks, ReportMode mode);

// {"blocks": [...], "realizable": bool, "dimension": n}, plus "basis" and
// "verified" when a rational canonical basis exists and is requested.
Json jk_report(const SkewPencil& p, ReportMode mode, bool with_basis);

// Aligned text rendering of jk_report output.
std::string jk_report_text(const Json& report);

// "3,1" -> {3, 1}; throws Malformed naming what.
std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& what);
std::string join_sizes(const std::vector<std::size_t>& v);

}  // namespace jkp
