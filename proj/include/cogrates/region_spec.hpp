#pragma once

#include <string>
#include <vector>

#include "cogrates/joint_pmf.hpp"
#include "cogrates/region_geometry.hpp"

namespace cogrates {

// I(A;B|C) or, when `b` is empty and `entropy` is set, H(A|C).
struct InfoTerm {
  double coeff = 1.0;
  bool entropy = false;
  std::vector<std::string> a, b, c;
};

// One parsed inequality: coeffs . rates <= constant + sum of terms.
// `pure` is set when the written right-hand side holds no rate variable;
// only such rows take part in the nonnegativity admissibility test.
struct SpecRow {
  std::string text;
  std::vector<double> coeffs;
  double constant = 0.0;
  std::vector<InfoTerm> terms;
  bool pure = false;
};

// A rate region given by rows of the form
//   "2 R2 + R1 <= I(V11,U11;Y1|V20,U10) - I(V11;V22|V20,U10)"
//   "R10 + L20 <= min{I(V20,U10;Y1), I(V20,U10;Y2)}"
//   "R1 = R11 + R10"
// Rate variables are listed in `rate_vars` (R1 and R2 first). Inside I()
// and H() variable names are separated by commas; a min{...} on the right
// expands into one row per alternative.
struct RegionSpec {
  std::string id;
  std::string title;
  std::vector<std::string> rate_vars;
  std::vector<std::string> auxiliaries;  // every random variable named by the rows
  std::vector<std::string> nonnegative;  // rate variables other than R1, R2 kept >= 0
  std::vector<std::string> source_rows;
};

// Parses the textual rows of `spec`. Errors: ParseError.
std::vector<SpecRow> compile_rows(const RegionSpec& spec);

const RegionSpec& registered_spec(const std::string& id);
std::vector<std::string> registered_spec_ids();

struct EvaluatedRegion {
  std::string spec_id;
  std::vector<SpecRow> rows;        // compiled rows, in order
  std::vector<double> row_values;   // evaluated right-hand side per row
  std::vector<std::size_t> negative_rows;
  HalfPlaneSystem system;           // rows plus nonnegativity, over rate_vars

  bool admissible() const { return negative_rows.empty(); }
};

// Evaluates every row on a pmf that already holds Y1, Y2 (and every
// auxiliary of the spec). Errors: MissingAuxiliary.
EvaluatedRegion eval_region_extended(const RegionSpec& spec, const JointPmf& extended);
EvaluatedRegion eval_region(const RegionSpec& spec, const JointPmf& p, const DiscreteChannel& ch);

// The (R1, R2) polygon: projection of the system onto R1, R2, or the
// origin when a pure right-hand side is negative.
HalfPlaneSystem rate_polygon(const EvaluatedRegion& region);

double evaluate_term(const InfoTerm& t, const JointPmf& p);

}  // namespace cogrates
