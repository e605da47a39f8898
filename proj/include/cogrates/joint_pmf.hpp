#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace cogrates {

// One conditional table p(var | parents) in a factored construction. The
// table is row-major over the parent values (in the listed order) with the
// variable's own value varying fastest.
struct Factor {
  std::string var;
  std::vector<std::string> parents;
  std::vector<double> table;
};

// Finite joint distribution over named discrete variables. The flat table
// is row-major in the declared order, the last variable varying fastest.
//
// Besides the stored ("base") variables a pmf can carry derived variables,
// each the tuple of some base variables. A derived variable with no sources
// is a constant. Tuples are handled exactly through the entropy of the
// union of their components, so no table is expanded.
class JointPmf {
 public:
  JointPmf() = default;
  JointPmf(std::vector<std::string> names, std::vector<std::size_t> sizes, std::vector<double> table);

  // Product of the factors, which must be listed so that every parent
  // precedes its child. `names` fixes the table order.
  static JointPmf from_factors(const std::vector<std::string>& names,
                               const std::vector<std::size_t>& sizes,
                               const std::vector<Factor>& factors);

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  const std::vector<double>& table() const { return table_; }
  std::size_t num_vars() const { return names_.size(); }

  bool has(const std::string& name) const;
  std::optional<std::size_t> base_index(const std::string& name) const;
  std::size_t size_of(const std::string& base_name) const;

  // Adds `name` as the tuple of `sources` (each a base or derived name).
  JointPmf with_derived(const std::string& name, const std::vector<std::string>& sources) const;
  const std::map<std::string, std::uint64_t>& derived() const { return derived_; }

  // Entropies in bits. Variable lists may repeat or overlap.
  double entropy(const std::vector<std::string>& vars) const;
  double conditional_entropy(const std::vector<std::string>& vars,
                             const std::vector<std::string>& cond) const;
  double mutual_information(const std::vector<std::string>& a, const std::vector<std::string>& b,
                            const std::vector<std::string>& cond = {}) const;

  // Distribution of the listed base variables, in the listed order.
  JointPmf marginal(const std::vector<std::string>& vars) const;

  // Probability of a full assignment of the base variables.
  double prob(const std::vector<std::size_t>& values) const;

  std::uint64_t mask_of(const std::vector<std::string>& vars) const;
  double entropy_of_mask(std::uint64_t mask) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> strides_;
  std::vector<double> table_;
  std::map<std::string, std::uint64_t> derived_;
  mutable std::unordered_map<std::uint64_t, double> entropy_cache_;
  // Marginal tables by variable mask (kept variables in stored order).
  mutable std::unordered_map<std::uint64_t, std::vector<double>> marginal_cache_;
  const std::vector<double>& marginal_of_mask(std::uint64_t mask) const;
};

// p(y1, y2 | x1, x2) flattened as ((x1 * |X2| + x2) * |Y1| + y1) * |Y2| + y2.
class DiscreteChannel {
 public:
  DiscreteChannel() = default;
  DiscreteChannel(std::size_t nx1, std::size_t nx2, std::size_t ny1, std::size_t ny2,
                  std::vector<double> table);

  // Channel with independent components p(y1 | x1, x2) p(y2 | x1, x2),
  // each flattened as (x1 * |X2| + x2) * |Y| + y.
  static DiscreteChannel from_marginals(std::size_t nx1, std::size_t nx2, std::size_t ny1,
                                        std::size_t ny2, const std::vector<double>& y1_given_x,
                                        const std::vector<double>& y2_given_x);

  std::size_t nx1() const { return nx1_; }
  std::size_t nx2() const { return nx2_; }
  std::size_t ny1() const { return ny1_; }
  std::size_t ny2() const { return ny2_; }
  const std::vector<double>& table() const { return table_; }

  double prob(std::size_t x1, std::size_t x2, std::size_t y1, std::size_t y2) const;

  // h(x1, x2) when every row of the y2 marginal is a point mass.
  std::optional<std::vector<std::size_t>> deterministic_y2() const;

 private:
  std::size_t nx1_ = 0, nx2_ = 0, ny1_ = 0, ny2_ = 0;
  std::vector<double> table_;
};

// Appends Y1 and Y2 to a pmf that holds X1 and X2 as base variables.
JointPmf extend_with_channel(const JointPmf& p, const DiscreteChannel& ch);

std::string pmf_to_json(const JointPmf& p);
JointPmf pmf_from_json(const std::string& text);
std::string channel_to_json(const DiscreteChannel& ch);
DiscreteChannel channel_from_json(const std::string& text);

}  // namespace cogrates
