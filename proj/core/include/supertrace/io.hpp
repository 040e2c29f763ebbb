#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "supertrace/characterization.hpp"

namespace supertrace {

struct SystemDocument {
  AffineStructure structure;
  std::vector<VectorFunction> psis;
  SystemTag declared_tag = SystemTag::Candidate;  // as written; never trusted
};

using Document = std::variant<AffineStructure, VectorFunction, SystemDocument, FiberOperator>;

struct ParsedDocument {
  Document value;
  bool canonicalized = false;  // some spectrum was not in canonical form
};

/// Throws SchemaError (with a JSON path) or RationalSyntaxError.
ParsedDocument parse_document(std::string_view text);

std::string serialize(const AffineStructure& a);
std::string serialize(const VectorFunction& f);
std::string serialize(const SystemDocument& s);
/// Conjugated operators have no document form (InvalidArgument).
std::string serialize(const FiberOperator& t);
std::string serialize(const Document& d);

SystemDocument to_document(const WaveletSystem& w);

/// "0.0e0", "1.5e-13": one decimal, bare exponent.
std::string format_residual(double value);

std::string report_json(const CheckReport& report, std::string_view command);
/// Human-readable lines; the witness line reads "eq <id>, <index>=<v>, xi in [a,b]·π".
std::string report_text(const CheckReport& report, std::string_view command);

struct CsvRow {
  RationalPi xi;
  Complex value;
};

/// Header `xi_num,xi_den,value_re,value_im`, LF line endings, %.17g values.
std::string to_csv(const std::vector<CsvRow>& rows);
std::vector<CsvRow> csv_rows(const CheckReport& report);

}  // namespace supertrace
