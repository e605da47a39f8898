#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cogrates/discrete_icdms.hpp"
#include "cogrates/joint_pmf.hpp"
#include "cogrates/region_geometry.hpp"
#include "cogrates/region_spec.hpp"

namespace cogrates {

// Shape of one conditional table p(var | parents). `allowed[row][value]`
// restricts the support of each row (empty: everything allowed). A row
// with no allowed value is filled uniformly; it must then carry zero
// probability through its parents.
struct FactorShape {
  std::string var;
  std::vector<std::string> parents;
  std::vector<std::vector<bool>> allowed;
};

// A search space of distributions, parameterized by conditional tables in
// factorization order. Every row with m allowed values uses m - 1
// stick-breaking coordinates in [0, 1].
struct DistributionFamily {
  std::vector<std::string> names;
  std::vector<std::size_t> sizes;
  std::vector<FactorShape> factors;
  std::vector<std::string> keep;  // marginalize onto these (empty: all)
  Assignment derived;             // aliases added after marginalization
  // Amount by which an extended pmf violates a side condition; zero means
  // the distribution is admissible for the search.
  std::function<double(const JointPmf& extended)> violation;

  std::size_t num_params() const;
  JointPmf build(std::span<const double> params) const;
  // Uniform point of every row simplex, as parameters.
  std::vector<double> random_params(std::uint64_t seed) const;
};

struct SearchConfig {
  std::size_t restarts = 500;
  std::size_t grid_levels = 4;
  std::vector<std::array<double, 2>> weight_sweep{{1, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 1}};
  std::uint64_t seed = 1;
  bool exhaustive = false;
  double initial_step = 0.25;
  double min_step = 1e-4;
  std::size_t max_candidates = 2000000;  // exhaustive-mode limit
};

void validate(const SearchConfig& cfg);

struct SearchResult {
  double value = 0.0;
  JointPmf argmax;
  RatePair point;
  std::size_t evaluations = 0;
};

// Binary auxiliaries unless stated; the free auxiliary U of the outer
// bound and the capacity rows has `aux_card` letters (default 4).
DistributionFamily default_family(const std::string& spec_id, const DiscreteChannel& ch, std::size_t aux_card = 4);

// p(x1) p(s | x1) p(u | x1, s) p(x2 | x1, s) with s = h(x1, x2) and x2 on
// the preimage of s, restricted by I(X1;Y1) <= I(X1;Y2). With
// `inner_assignment` the aliases of the inner-bound substitution are added.
DistributionFamily semidet_family(const DiscreteChannel& ch, bool inner_assignment, std::size_t aux_card = 2);

// Largest w . (R1, R2) over the region's polygons for distributions in the
// family. Deterministic given cfg.seed.
SearchResult maximize_weighted_rate(const RegionSpec& spec, const DiscreteChannel& ch,
                                    const DistributionFamily& family, std::array<double, 2> w,
                                    const SearchConfig& cfg);
SearchResult maximize_weighted_rate(const RegionSpec& spec, const DiscreteChannel& ch, std::array<double, 2> w,
                                    const SearchConfig& cfg);

// Convex hull of the downward closure of all polygons found over the
// weight sweep.
Envelope frontier(const RegionSpec& spec, const DiscreteChannel& ch, const DistributionFamily& family,
                  const SearchConfig& cfg);
Envelope frontier(const RegionSpec& spec, const DiscreteChannel& ch, const SearchConfig& cfg);

// Concave majorant of the downward closure of a point set.
Envelope hull_envelope(const std::vector<RatePair>& points);

}  // namespace cogrates
