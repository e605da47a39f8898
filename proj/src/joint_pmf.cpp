#include "cogrates/joint_pmf.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numeric>

#include "cogrates/errors.hpp"

namespace cogrates {

namespace {

constexpr double kSumTol = 1e-12;
constexpr double kZeroProb = 1e-15;
constexpr std::size_t kMaxVars = 64;

void check_distribution(const std::vector<double>& t, const std::string& what) {
  double s = 0.0;
  for (double v : t) {
    if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::InvalidPmf, what + " has a negative or non-finite entry");
    s += v;
  }
  if (std::abs(s - 1.0) > kSumTol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, " sums to %.15g", s);
    throw Error(ErrorCode::InvalidPmf, what + buf);
  }
}

std::size_t product(const std::vector<std::size_t>& sizes) {
  return std::accumulate(sizes.begin(), sizes.end(), std::size_t{1}, std::multiplies<>());
}

}  // namespace

JointPmf::JointPmf(std::vector<std::string> names, std::vector<std::size_t> sizes, std::vector<double> table)
    : names_(std::move(names)), sizes_(std::move(sizes)), table_(std::move(table)) {
  if (names_.size() != sizes_.size()) throw Error(ErrorCode::InvalidPmf, "names and sizes differ in length");
  if (names_.size() > kMaxVars) throw Error(ErrorCode::InvalidPmf, "too many variables");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (sizes_[i] == 0) throw Error(ErrorCode::InvalidPmf, "empty alphabet for " + names_[i]);
    for (std::size_t j = 0; j < i; ++j)
      if (names_[i] == names_[j]) throw Error(ErrorCode::InvalidPmf, "duplicate variable " + names_[i]);
  }
  if (table_.size() != product(sizes_)) throw Error(ErrorCode::InvalidPmf, "table size does not match the alphabets");
  check_distribution(table_, "joint table");
  strides_.assign(names_.size(), 1);
  for (std::size_t i = names_.size(); i-- > 1;) strides_[i - 1] = strides_[i] * sizes_[i];
}

JointPmf JointPmf::from_factors(const std::vector<std::string>& names, const std::vector<std::size_t>& sizes,
                                const std::vector<Factor>& factors) {
  auto index = [&](const std::string& n) {
    auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) throw Error(ErrorCode::UnknownVariable, n);
    return static_cast<std::size_t>(it - names.begin());
  };
  struct Compiled {
    std::size_t var;
    std::vector<std::size_t> parents;
    const std::vector<double>* table;
  };
  std::vector<Compiled> plan;
  std::vector<bool> defined(names.size(), false);
  for (const auto& f : factors) {
    Compiled c{index(f.var), {}, &f.table};
    std::size_t rows = 1;
    for (const auto& p : f.parents) {
      c.parents.push_back(index(p));
      if (!defined[c.parents.back()]) throw Error(ErrorCode::InvalidPmf, "parent " + p + " of " + f.var + " not yet defined");
      rows *= sizes[c.parents.back()];
    }
    if (defined[c.var]) throw Error(ErrorCode::InvalidPmf, "variable " + f.var + " defined twice");
    defined[c.var] = true;
    const std::size_t card = sizes[c.var];
    if (f.table.size() != rows * card) throw Error(ErrorCode::InvalidPmf, "factor table size mismatch for " + f.var);
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> row(f.table.begin() + r * card, f.table.begin() + (r + 1) * card);
      check_distribution(row, "conditional row of " + f.var);
    }
    plan.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!defined[i]) throw Error(ErrorCode::InvalidPmf, "no factor for " + names[i]);

  const std::size_t total = product(sizes);
  std::vector<double> table(total);
  std::vector<std::size_t> digits(names.size(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    double p = 1.0;
    for (const auto& c : plan) {
      std::size_t row = 0;
      for (std::size_t par : c.parents) row = row * sizes[par] + digits[par];
      p *= (*c.table)[row * sizes[c.var] + digits[c.var]];
      if (p == 0.0) break;
    }
    table[idx] = p;
    for (std::size_t k = names.size(); k-- > 0;) {
      if (++digits[k] < sizes[k]) break;
      digits[k] = 0;
    }
  }
  // Products of normalized rows sum to one up to rounding; renormalize so
  // the stricter joint check is met for large tables.
  double s = std::accumulate(table.begin(), table.end(), 0.0);
  for (auto& v : table) v /= s;
  return JointPmf(names, sizes, std::move(table));
}

bool JointPmf::has(const std::string& name) const {
  return base_index(name).has_value() || derived_.count(name) > 0;
}

std::optional<std::size_t> JointPmf::base_index(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t JointPmf::size_of(const std::string& base_name) const {
  auto i = base_index(base_name);
  if (!i) throw Error(ErrorCode::UnknownVariable, base_name);
  return sizes_[*i];
}

JointPmf JointPmf::with_derived(const std::string& name, const std::vector<std::string>& sources) const {
  if (base_index(name)) throw Error(ErrorCode::InvalidPmf, name + " is already a stored variable");
  JointPmf out = *this;
  out.derived_[name] = mask_of(sources);
  return out;
}

std::uint64_t JointPmf::mask_of(const std::vector<std::string>& vars) const {
  std::uint64_t m = 0;
  for (const auto& v : vars) {
    if (auto i = base_index(v)) {
      m |= std::uint64_t{1} << *i;
      continue;
    }
    auto it = derived_.find(v);
    if (it == derived_.end()) throw Error(ErrorCode::UnknownVariable, v);
    m |= it->second;
  }
  return m;
}

const std::vector<double>& JointPmf::marginal_of_mask(std::uint64_t mask) const {
  const std::uint64_t full = names_.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << names_.size()) - 1;
  if (mask == full) return table_;
  if (auto it = marginal_cache_.find(mask); it != marginal_cache_.end()) return it->second;
  // Marginalize from the smallest cached superset rather than the full table.
  std::uint64_t src_mask = full;
  const std::vector<double>* src = &table_;
  for (const auto& [m, t] : marginal_cache_)
    if ((m & mask) == mask && t.size() < src->size()) {
      src_mask = m;
      src = &t;
    }
  std::vector<std::size_t> vars;
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (src_mask >> i & 1U) vars.push_back(i);
  // Output strides for the kept variables, zero for summed ones.
  std::vector<std::size_t> coef(vars.size(), 0), digit(vars.size(), 0);
  std::size_t out_size = 1;
  for (std::size_t k = vars.size(); k-- > 0;)
    if (mask >> vars[k] & 1U) {
      coef[k] = out_size;
      out_size *= sizes_[vars[k]];
    }
  std::vector<double> out(out_size, 0.0);
  // Odometer walk: the output index is updated incrementally.
  std::size_t m = 0;
  for (double v : *src) {
    out[m] += v;
    for (std::size_t k = vars.size(); k-- > 0;) {
      if (++digit[k] < sizes_[vars[k]]) {
        m += coef[k];
        break;
      }
      digit[k] = 0;
      m -= (sizes_[vars[k]] - 1) * coef[k];
    }
  }
  return marginal_cache_.emplace(mask, std::move(out)).first->second;
}

double JointPmf::entropy_of_mask(std::uint64_t mask) const {
  if (mask == 0) return 0.0;
  if (auto it = entropy_cache_.find(mask); it != entropy_cache_.end()) return it->second;
  double h = 0.0;
  for (double p : marginal_of_mask(mask))
    if (p > kZeroProb) h -= p * std::log2(p);
  entropy_cache_.emplace(mask, h);
  return h;
}

double JointPmf::entropy(const std::vector<std::string>& vars) const { return entropy_of_mask(mask_of(vars)); }

double JointPmf::conditional_entropy(const std::vector<std::string>& vars,
                                     const std::vector<std::string>& cond) const {
  std::uint64_t c = mask_of(cond);
  return std::max(0.0, entropy_of_mask(mask_of(vars) | c) - entropy_of_mask(c));
}

double JointPmf::mutual_information(const std::vector<std::string>& a, const std::vector<std::string>& b,
                                    const std::vector<std::string>& cond) const {
  std::uint64_t ma = mask_of(a), mb = mask_of(b), mc = mask_of(cond);
  double v = entropy_of_mask(ma | mc) + entropy_of_mask(mb | mc) - entropy_of_mask(ma | mb | mc) -
             entropy_of_mask(mc);
  return std::max(0.0, v);
}

JointPmf JointPmf::marginal(const std::vector<std::string>& vars) const {
  std::vector<std::size_t> idx, sizes;
  for (const auto& v : vars) {
    auto i = base_index(v);
    if (!i) throw Error(ErrorCode::UnknownVariable, v);
    idx.push_back(*i);
    sizes.push_back(sizes_[*i]);
  }
  std::vector<double> t(product(sizes), 0.0);
  for (std::size_t n = 0; n < table_.size(); ++n) {
    std::size_t m = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) m = m * sizes[k] + n / strides_[idx[k]] % sizes_[idx[k]];
    t[m] += table_[n];
  }
  double s = std::accumulate(t.begin(), t.end(), 0.0);
  for (auto& v : t) v /= s;
  return JointPmf(vars, sizes, std::move(t));
}

double JointPmf::prob(const std::vector<std::size_t>& values) const {
  if (values.size() != names_.size()) throw Error(ErrorCode::InvalidPmf, "assignment length mismatch");
  std::size_t n = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] >= sizes_[k]) throw Error(ErrorCode::InvalidPmf, "value out of range for " + names_[k]);
    n += values[k] * strides_[k];
  }
  return table_[n];
}

DiscreteChannel::DiscreteChannel(std::size_t nx1, std::size_t nx2, std::size_t ny1, std::size_t ny2,
                                 std::vector<double> table)
    : nx1_(nx1), nx2_(nx2), ny1_(ny1), ny2_(ny2), table_(std::move(table)) {
  if (nx1 == 0 || nx2 == 0 || ny1 == 0 || ny2 == 0) throw Error(ErrorCode::InvalidPmf, "empty channel alphabet");
  if (table_.size() != nx1 * nx2 * ny1 * ny2) throw Error(ErrorCode::InvalidPmf, "channel table size mismatch");
  const std::size_t row = ny1 * ny2;
  for (std::size_t r = 0; r < nx1 * nx2; ++r) {
    std::vector<double> v(table_.begin() + r * row, table_.begin() + (r + 1) * row);
    check_distribution(v, "channel row");
  }
}

DiscreteChannel DiscreteChannel::from_marginals(std::size_t nx1, std::size_t nx2, std::size_t ny1, std::size_t ny2,
                                                const std::vector<double>& y1_given_x,
                                                const std::vector<double>& y2_given_x) {
  if (y1_given_x.size() != nx1 * nx2 * ny1 || y2_given_x.size() != nx1 * nx2 * ny2)
    throw Error(ErrorCode::InvalidPmf, "marginal channel size mismatch");
  std::vector<double> t(nx1 * nx2 * ny1 * ny2);
  for (std::size_t x = 0; x < nx1 * nx2; ++x) {
    double s = 0.0;
    for (std::size_t a = 0; a < ny1; ++a)
      for (std::size_t b = 0; b < ny2; ++b) s += t[(x * ny1 + a) * ny2 + b] = y1_given_x[x * ny1 + a] * y2_given_x[x * ny2 + b];
    for (std::size_t k = 0; k < ny1 * ny2; ++k) t[x * ny1 * ny2 + k] /= s;
  }
  return DiscreteChannel(nx1, nx2, ny1, ny2, std::move(t));
}

double DiscreteChannel::prob(std::size_t x1, std::size_t x2, std::size_t y1, std::size_t y2) const {
  return table_[((x1 * nx2_ + x2) * ny1_ + y1) * ny2_ + y2];
}

std::optional<std::vector<std::size_t>> DiscreteChannel::deterministic_y2() const {
  std::vector<std::size_t> h(nx1_ * nx2_);
  for (std::size_t x = 0; x < nx1_ * nx2_; ++x) {
    bool found = false;
    for (std::size_t b = 0; b < ny2_; ++b) {
      double m = 0.0;
      for (std::size_t a = 0; a < ny1_; ++a) m += table_[(x * ny1_ + a) * ny2_ + b];
      if (std::abs(m - 1.0) <= kSumTol) {
        h[x] = b;
        found = true;
      } else if (m > kSumTol) {
        return std::nullopt;
      }
    }
    if (!found) return std::nullopt;
  }
  return h;
}

JointPmf extend_with_channel(const JointPmf& p, const DiscreteChannel& ch) {
  auto i1 = p.base_index("X1");
  auto i2 = p.base_index("X2");
  if (!i1 || !i2) throw Error(ErrorCode::MissingAuxiliary, "the pmf must hold X1 and X2 as stored variables");
  if (p.has("Y1") || p.has("Y2")) throw Error(ErrorCode::InvalidPmf, "the pmf already holds channel outputs");
  if (p.sizes()[*i1] != ch.nx1() || p.sizes()[*i2] != ch.nx2())
    throw Error(ErrorCode::AlphabetMismatch, "input alphabets of the pmf and the channel differ");
  auto names = p.names();
  auto sizes = p.sizes();
  names.push_back("Y1");
  names.push_back("Y2");
  sizes.push_back(ch.ny1());
  sizes.push_back(ch.ny2());
  const std::size_t ny = ch.ny1() * ch.ny2();
  const auto& src = p.table();
  std::size_t s1 = 1, s2 = 1;
  for (std::size_t k = *i1 + 1; k < p.num_vars(); ++k) s1 *= p.sizes()[k];
  for (std::size_t k = *i2 + 1; k < p.num_vars(); ++k) s2 *= p.sizes()[k];
  std::vector<double> t(src.size() * ny);
  for (std::size_t n = 0; n < src.size(); ++n) {
    std::size_t x1 = n / s1 % ch.nx1(), x2 = n / s2 % ch.nx2();
    const double* row = &ch.table()[(x1 * ch.nx2() + x2) * ny];
    for (std::size_t k = 0; k < ny; ++k) t[n * ny + k] = src[n] * row[k];
  }
  double s = std::accumulate(t.begin(), t.end(), 0.0);
  for (auto& v : t) v /= s;
  JointPmf out(std::move(names), std::move(sizes), std::move(t));
  for (const auto& [name, mask] : p.derived()) {
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < p.num_vars(); ++i)
      if (mask >> i & 1U) parts.push_back(p.names()[i]);
    out = out.with_derived(name, parts);
  }
  return out;
}

std::string pmf_to_json(const JointPmf& p) {
  nlohmann::json j;
  j["vars"] = p.names();
  j["sizes"] = p.sizes();
  j["table"] = p.table();
  if (!p.derived().empty()) {
    nlohmann::json d = nlohmann::json::object();
    for (const auto& [name, mask] : p.derived()) {
      std::vector<std::string> parts;
      for (std::size_t i = 0; i < p.num_vars(); ++i)
        if (mask >> i & 1U) parts.push_back(p.names()[i]);
      d[name] = parts;
    }
    j["derived"] = d;
  }
  return j.dump(2);
}

JointPmf pmf_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    JointPmf p(j.at("vars").get<std::vector<std::string>>(), j.at("sizes").get<std::vector<std::size_t>>(),
               j.at("table").get<std::vector<double>>());
    if (j.contains("derived"))
      for (const auto& [name, parts] : j["derived"].items())
        p = p.with_derived(name, parts.get<std::vector<std::string>>());
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("pmf JSON: ") + e.what());
  }
}

std::string channel_to_json(const DiscreteChannel& ch) {
  nlohmann::json j;
  j["vars"] = {"X1", "X2", "Y1", "Y2"};
  j["sizes"] = {ch.nx1(), ch.nx2(), ch.ny1(), ch.ny2()};
  j["table"] = ch.table();
  return j.dump(2);
}

DiscreteChannel channel_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    auto vars = j.at("vars").get<std::vector<std::string>>();
    if (vars != std::vector<std::string>{"X1", "X2", "Y1", "Y2"})
      throw Error(ErrorCode::ParseError, "channel JSON vars must be [X1, X2, Y1, Y2]");
    auto sizes = j.at("sizes").get<std::vector<std::size_t>>();
    if (sizes.size() != 4) throw Error(ErrorCode::ParseError, "channel JSON needs four sizes");
    return DiscreteChannel(sizes[0], sizes[1], sizes[2], sizes[3], j.at("table").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("channel JSON: ") + e.what());
  }
}

}  // namespace cogrates
