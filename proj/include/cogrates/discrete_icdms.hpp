#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cogrates/joint_pmf.hpp"
#include "cogrates/region_geometry.hpp"
#include "cogrates/region_spec.hpp"

namespace cogrates {

// Variable assignment "name := tuple of sources"; an empty tuple is a
// constant.
using Assignment = std::vector<std::pair<std::string, std::vector<std::string>>>;

JointPmf apply_assignment(const JointPmf& p, const Assignment& a);

// The auxiliary assignments of the special-case reductions, keyed by
// "strong", "weak", "wu", "jiang_xin", "maric", "marton" and "semidet".
const Assignment& reduction_assignment(const std::string& case_id);
std::vector<std::string> reduction_cases();

struct ReductionReport {
  std::string case_id;
  std::string relation;        // what is compared
  bool asserted = true;        // false for report-only comparisons
  bool holds = false;
  double max_gap = 0.0;
  bool admissible = true;      // false when the comparison is vacuous
  bool condition_holds = true; // regime assumption on this distribution
  std::string details;
};

inline constexpr double kRowEqualityTol = 1e-9;
inline constexpr double kPolygonTol = 1e-7;

// `base` holds the smaller distribution of the case (for instance
// Q, W, U, V, X1, X2 for Jiang-Xin) and the channel inputs.
// Errors: SubstitutionInconsistent, MissingAuxiliary, UnknownSpec.
ReductionReport check_reduction(const std::string& case_id, const JointPmf& base, const DiscreteChannel& ch);

struct SemidetReport {
  HalfPlaneSystem rows;          // capacity rows over R1, R2
  bool condition_flag = false;   // I(X1;Y1) <= I(X1;Y2) for this pmf
  double lhs = 0.0;              // I(Y2;U|X1)
  double rhs = 0.0;              // I(U;X2|X1)
  double gap() const { return rhs - lhs; }
};

// `p` is over U, X1, X2. Errors: NotDeterministic, MissingAuxiliary.
SemidetReport semidet_capacity_rows(const JointPmf& p, const DiscreteChannel& ch);

// ------------------------------------------------------------ random families

std::vector<double> dirichlet_row(std::mt19937_64& rng, std::size_t card, double concentration);
std::vector<double> dirichlet_rows(std::mt19937_64& rng, std::size_t rows, std::size_t card,
                                   double concentration);
DiscreteChannel random_channel(std::mt19937_64& rng, std::size_t nx1, std::size_t nx2, std::size_t ny1,
                               std::size_t ny2, double concentration);
// Mixture (1 - eps) p + eps q over the same variables.
JointPmf mix(const JointPmf& p, const JointPmf& q, double eps);
JointPmf uniform_simplex_pmf(std::mt19937_64& rng, const std::vector<std::string>& names,
                             const std::vector<std::size_t>& sizes);

struct Instance {
  JointPmf p;
  DiscreteChannel ch;
};

// Binary auxiliaries U10, U11, V11, V20, V22 and inputs X1, X2 built in
// codebook order, mixed with an eps share of a uniform-simplex joint.
Instance random_icdms_instance(std::mt19937_64& rng, double eps = 0.05);
// W, V1, V2, X2 with a constant X1.
Instance random_broadcast_instance(std::mt19937_64& rng);
// Q, W, U, V, X1, X2 in the Jiang-Xin factorization.
Instance random_jx_instance(std::mt19937_64& rng);
// Q, X1a, X1b, U2c, U2a, X1, X2, arbitrary joint.
Instance random_maric_instance(std::mt19937_64& rng);
// U, X1, X2 with a deterministic Y2 = h(X1, X2). The input distribution is
// built so that U and X2 are independent given (X1, Y2).
Instance random_semidet_instance(std::mt19937_64& rng);
// Channels with Y1 = Y2 through one random component (strong-interference
// conditions hold with equality) or Y1 a degraded copy of Y2 (weak).
DiscreteChannel random_same_output_channel(std::mt19937_64& rng, std::size_t nx1, std::size_t nx2, std::size_t ny);
DiscreteChannel random_degraded_channel(std::mt19937_64& rng, std::size_t nx1, std::size_t nx2, std::size_t ny);

// ----------------------------------------------------------- batch checks

// Projection of the pre-elimination system against the five-row polygon, both directions.
struct FmEquivalence {
  double distance = 0.0;      // polygon_distance
  double excess_thm2 = 0.0;   // projection outside the five-row polygon
  double excess_thm1 = 0.0;   // five-row polygon outside the projection
  double excess_thm3 = 0.0;   // sequential-decoding polygon outside the projection
  bool nonempty = false;
};
FmEquivalence compare_thm1_thm2(const JointPmf& p, const DiscreteChannel& ch);

}  // namespace cogrates
