#include "cogrates/frontier_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cogrates/errors.hpp"

namespace cogrates {

namespace {

constexpr std::size_t kMaxEvaluationsPerRestart = 50000;
constexpr double kImprovementTol = 1e-12;
// Point sets are reduced to their hull once they grow past this size.
constexpr std::size_t kHullCompactionSize = 4096;

std::size_t row_count(const DistributionFamily& fam, const FactorShape& f) {
  std::size_t rows = 1;
  for (const auto& p : f.parents) {
    auto it = std::find(fam.names.begin(), fam.names.end(), p);
    if (it == fam.names.end()) throw Error(ErrorCode::UnknownVariable, "factor parent " + p);
    rows *= fam.sizes[static_cast<std::size_t>(it - fam.names.begin())];
  }
  return rows;
}

std::size_t card_of(const DistributionFamily& fam, const std::string& v) {
  auto it = std::find(fam.names.begin(), fam.names.end(), v);
  if (it == fam.names.end()) throw Error(ErrorCode::UnknownVariable, "factor variable " + v);
  return fam.sizes[static_cast<std::size_t>(it - fam.names.begin())];
}

std::size_t allowed_count(const FactorShape& f, std::size_t row, std::size_t card) {
  if (f.allowed.empty()) return card;
  return static_cast<std::size_t>(std::count(f.allowed[row].begin(), f.allowed[row].end(), true));
}

bool is_allowed(const FactorShape& f, std::size_t row, std::size_t value) {
  return f.allowed.empty() || f.allowed[row][value];
}

class PointHull {
 public:
  void add(RatePair p) {
    pts_.push_back({std::max(p.r1, 0.0), std::max(p.r2, 0.0)});
    if (pts_.size() > kHullCompactionSize) compact();
  }
  void add_all(const std::vector<RatePair>& ps) {
    for (auto p : ps) add(p);
  }
  Envelope envelope() const { return hull_envelope(pts_); }

 private:
  void compact() {
    Envelope e = hull_envelope(pts_);
    pts_.clear();
    for (std::size_t i = 0; i < e.size(); ++i) pts_.push_back({e.r1_grid()[i], e.r2_max()[i]});
  }
  std::vector<RatePair> pts_;
};

struct Evaluation {
  double value = 0.0;
  RatePair point;
  std::vector<RatePair> vertices;
};

class Objective {
 public:
  Objective(const RegionSpec& spec, const DiscreteChannel& ch, const DistributionFamily& fam,
            std::array<double, 2> w)
      : spec_(spec), ch_(ch), fam_(fam), w_(w) {}

  JointPmf pmf(std::span<const double> x) const {
    JointPmf p = fam_.build(x);
    if (!fam_.keep.empty()) p = p.marginal(fam_.keep);
    return apply_assignment(p, fam_.derived);
  }

  Evaluation operator()(std::span<const double> x) {
    ++count;
    JointPmf ext = extend_with_channel(pmf(x), ch_);
    Evaluation e;
    if (fam_.violation) {
      double v = fam_.violation(ext);
      if (v > kImprovementTol) {
        e.value = -1.0 - v;
        return e;
      }
    }
    auto poly = rate_polygon(eval_region_extended(spec_, ext));
    e.vertices = polygon_vertices(poly);
    e.value = 0.0;
    for (auto v : e.vertices) {
      double s = w_[0] * v.r1 + w_[1] * v.r2;
      if (s > e.value) {
        e.value = s;
        e.point = v;
      }
    }
    return e;
  }

  std::size_t count = 0;

 private:
  const RegionSpec& spec_;
  const DiscreteChannel& ch_;
  const DistributionFamily& fam_;
  std::array<double, 2> w_;
};

struct Outcome {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> x;
  RatePair point;
};

void consider(Outcome& best, const Evaluation& e, std::span<const double> x) {
  if (e.value > best.value) {
    best.value = e.value;
    best.x.assign(x.begin(), x.end());
    best.point = e.point;
  }
}

void enumerate(Objective& obj, std::size_t n, const SearchConfig& cfg, Outcome& best, PointHull* sink) {
  const std::size_t levels = cfg.grid_levels + 1;
  double total = std::pow(static_cast<double>(levels), static_cast<double>(n));
  if (total > static_cast<double>(cfg.max_candidates))
    throw Error(ErrorCode::InvalidParameter,
                "exhaustive grid has " + std::to_string(total) + " candidates, limit " +
                    std::to_string(cfg.max_candidates));
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> x(n, 0.0);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(idx[i]) / static_cast<double>(cfg.grid_levels);
    Evaluation e = obj(x);
    consider(best, e, x);
    if (sink) sink->add_all(e.vertices);
    std::size_t i = 0;
    while (i < n && ++idx[i] == levels) idx[i++] = 0;
    if (i == n) break;
  }
}

// Coordinate ascent with step halving from one starting point.
Evaluation climb(Objective& obj, std::vector<double>& x, const SearchConfig& cfg) {
  Evaluation cur = obj(x);
  const std::size_t start = obj.count;
  double step = cfg.initial_step;
  while (step >= cfg.min_step && obj.count - start < kMaxEvaluationsPerRestart) {
    bool improved = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double dir : {1.0, -1.0}) {
        double old = x[i];
        double t = std::clamp(old + dir * step, 0.0, 1.0);
        if (t == old) continue;
        x[i] = t;
        Evaluation e = obj(x);
        if (e.value > cur.value + kImprovementTol) {
          cur = std::move(e);
          improved = true;
          break;
        }
        x[i] = old;
      }
    }
    if (!improved) step *= 0.5;
  }
  return cur;
}

void check_weight(std::array<double, 2> w) {
  if (!(w[0] >= 0.0) || !(w[1] >= 0.0) || (w[0] == 0.0 && w[1] == 0.0) || !std::isfinite(w[0]) ||
      !std::isfinite(w[1]))
    throw Error(ErrorCode::InvalidParameter, "weights must be nonnegative, finite and not both zero");
}

Outcome run(const RegionSpec& spec, const DiscreteChannel& ch, const DistributionFamily& fam,
            std::array<double, 2> w, const SearchConfig& cfg, PointHull* sink, std::size_t& evaluations) {
  Objective obj(spec, ch, fam, w);
  Outcome best;
  const std::size_t n = fam.num_params();
  if (cfg.exhaustive || n == 0) {
    enumerate(obj, n, cfg, best, sink);
  } else {
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
      std::vector<double> x = fam.random_params(cfg.seed + r);
      Evaluation e = climb(obj, x, cfg);
      consider(best, e, x);
      if (sink) sink->add_all(e.vertices);
    }
  }
  evaluations = obj.count;
  return best;
}

SearchResult to_result(const Objective& obj, const Outcome& o, std::size_t evaluations) {
  SearchResult r;
  r.value = std::max(o.value, 0.0);
  r.argmax = obj.pmf(o.x);
  r.point = o.point;
  r.evaluations = evaluations;
  return r;
}

// Chain factorization: every variable conditioned on all earlier ones.
std::vector<FactorShape> chain(const std::vector<std::string>& order) {
  std::vector<FactorShape> f;
  for (std::size_t i = 0; i < order.size(); ++i)
    f.push_back({order[i], std::vector<std::string>(order.begin(), order.begin() + static_cast<long>(i)), {}});
  return f;
}

}  // namespace

std::size_t DistributionFamily::num_params() const {
  std::size_t n = 0;
  for (const auto& f : factors) {
    std::size_t rows = row_count(*this, f), card = card_of(*this, f.var);
    if (!f.allowed.empty() && f.allowed.size() != rows)
      throw Error(ErrorCode::InvalidParameter, "support mask of " + f.var + " has the wrong row count");
    for (std::size_t r = 0; r < rows; ++r) {
      std::size_t m = allowed_count(f, r, card);
      if (m > 1) n += m - 1;
    }
  }
  return n;
}

JointPmf DistributionFamily::build(std::span<const double> params) const {
  if (params.size() != num_params())
    throw Error(ErrorCode::InvalidParameter, "expected " + std::to_string(num_params()) + " parameters");
  std::vector<Factor> out;
  std::size_t k = 0;
  for (const auto& f : factors) {
    std::size_t rows = row_count(*this, f), card = card_of(*this, f.var);
    std::vector<double> table(rows * card, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      double* row = table.data() + r * card;
      std::size_t m = allowed_count(f, r, card);
      if (m == 0) {
        std::fill(row, row + card, 1.0 / static_cast<double>(card));
        continue;
      }
      double rest = 1.0;
      std::size_t seen = 0;
      for (std::size_t v = 0; v < card; ++v) {
        if (!is_allowed(f, r, v)) continue;
        if (++seen == m) {
          row[v] = rest;
          break;
        }
        double t = std::clamp(params[k++], 0.0, 1.0);
        row[v] = rest * t;
        rest -= row[v];
      }
    }
    out.push_back({f.var, f.parents, std::move(table)});
  }
  return JointPmf::from_factors(names, sizes, out);
}

std::vector<double> DistributionFamily::random_params(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> x;
  for (const auto& f : factors) {
    std::size_t rows = row_count(*this, f), card = card_of(*this, f.var);
    for (std::size_t r = 0; r < rows; ++r) {
      std::size_t m = allowed_count(f, r, card);
      // t_j ~ Beta(1, m - j) makes the stick-breaking point uniform on the
      // simplex.
      for (std::size_t j = 1; j < m; ++j)
        x.push_back(1.0 - std::pow(1.0 - unif(rng), 1.0 / static_cast<double>(m - j)));
    }
  }
  return x;
}

void validate(const SearchConfig& cfg) {
  if (cfg.restarts == 0) throw Error(ErrorCode::InvalidParameter, "restarts must be positive");
  if (cfg.grid_levels == 0) throw Error(ErrorCode::InvalidParameter, "grid_levels must be positive");
  if (!(cfg.initial_step > 0.0) || !(cfg.min_step > 0.0) || cfg.min_step > cfg.initial_step)
    throw Error(ErrorCode::InvalidParameter, "need 0 < min_step <= initial_step");
  if (cfg.weight_sweep.empty()) throw Error(ErrorCode::InvalidParameter, "empty weight sweep");
  for (auto w : cfg.weight_sweep) check_weight(w);
}

DistributionFamily default_family(const std::string& spec_id, const DiscreteChannel& ch, std::size_t aux_card) {
  if (aux_card == 0) throw Error(ErrorCode::InvalidParameter, "auxiliary cardinality must be positive");
  const std::size_t n1 = ch.nx1(), n2 = ch.nx2();
  DistributionFamily f;
  if (spec_id == "thm1" || spec_id == "thm2" || spec_id == "thm3") {
    f.names = {"U10", "U11", "V11", "V20", "V22", "X1", "X2"};
    f.sizes = {2, 2, 2, 2, 2, n1, n2};
    f.factors = {{"U10", {}, {}},
                 {"U11", {"U10"}, {}},
                 {"V20", {"U10"}, {}},
                 {"V11", {"V20", "U10"}, {}},
                 {"V22", {"V20", "U10"}, {}},
                 {"X1", {"U11", "U10"}, {}},
                 {"X2", {"U10", "U11", "V11", "V20", "V22"}, {}}};
  } else if (spec_id == "thm4" || spec_id == "thm5" || spec_id == "prop2") {
    f.names = {"U", "X1", "X2"};
    f.sizes = {aux_card, n1, n2};
    f.factors = {{"X1", {}, {}}, {"X2", {"X1"}, {}}, {"U", {"X1", "X2"}, {}}};
  } else if (spec_id == "prop1") {
    f.names = {"X1", "X2"};
    f.sizes = {n1, n2};
    f.factors = chain(f.names);
  } else if (spec_id == "prop3") {
    f.names = {"U", "V", "X1", "X2"};
    f.sizes = {2, 2, n1, n2};
    f.factors = chain(f.names);
  } else if (spec_id == "prop4") {
    f.names = {"Q", "W", "X1", "U", "V", "X2"};
    f.sizes = {2, 2, n1, 2, 2, n2};
    f.factors = {{"Q", {}, {}},          {"W", {"Q"}, {}},      {"X1", {"Q", "W"}, {}},
                 {"U", {"Q", "W"}, {}}, {"V", {"Q", "W"}, {}}, {"X2", {"U", "V", "W", "Q"}, {}}};
  } else if (spec_id == "prop5" || spec_id == "mgks_prime") {
    f.names = {"Q", "X1a", "X1b", "U2c", "U2a", "X1", "X2"};
    f.sizes = {2, 2, 2, 2, 2, n1, n2};
    f.factors = chain(f.names);
  } else if (spec_id == "prop6" || spec_id == "marton_equiv") {
    f.names = {"W", "V1", "V2", "X1", "X2"};
    f.sizes = {2, 2, 2, n1, n2};
    std::vector<bool> first(n1, false);
    first[0] = true;
    f.factors = {{"W", {}, {}},
                 {"V1", {"W"}, {}},
                 {"V2", {"W", "V1"}, {}},
                 {"X1", {}, {first}},
                 {"X2", {"W", "V1", "V2"}, {}}};
  } else {
    throw Error(ErrorCode::UnknownSpec, "no search family for " + spec_id);
  }
  return f;
}

DistributionFamily semidet_family(const DiscreteChannel& ch, bool inner_assignment, std::size_t aux_card) {
  auto h = ch.deterministic_y2();
  if (!h) throw Error(ErrorCode::NotDeterministic, "Y2 is not a function of (X1, X2)");
  if (aux_card == 0) throw Error(ErrorCode::InvalidParameter, "auxiliary cardinality must be positive");
  const std::size_t n1 = ch.nx1(), n2 = ch.nx2(), ns = ch.ny2();
  DistributionFamily f;
  f.names = {"U", "X1", "S", "X2"};
  f.sizes = {aux_card, n1, ns, n2};
  FactorShape s{"S", {"X1"}, std::vector<std::vector<bool>>(n1, std::vector<bool>(ns, false))};
  FactorShape x2{"X2", {"X1", "S"}, std::vector<std::vector<bool>>(n1 * ns, std::vector<bool>(n2, false))};
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t b = 0; b < n2; ++b) {
      std::size_t sv = (*h)[a * n2 + b];
      s.allowed[a][sv] = true;
      x2.allowed[a * ns + sv][b] = true;
    }
  f.factors = {{"X1", {}, {}}, s, {"U", {"X1", "S"}, {}}, x2};
  f.keep = {"U", "X1", "X2"};
  if (inner_assignment) f.derived = reduction_assignment("semidet");
  f.violation = [](const JointPmf& e) {
    return std::max(0.0, e.mutual_information({"X1"}, {"Y1"}) - e.mutual_information({"X1"}, {"Y2"}));
  };
  return f;
}

SearchResult maximize_weighted_rate(const RegionSpec& spec, const DiscreteChannel& ch,
                                    const DistributionFamily& family, std::array<double, 2> w,
                                    const SearchConfig& cfg) {
  validate(cfg);
  check_weight(w);
  std::size_t evals = 0;
  Outcome o = run(spec, ch, family, w, cfg, nullptr, evals);
  return to_result(Objective(spec, ch, family, w), o, evals);
}

SearchResult maximize_weighted_rate(const RegionSpec& spec, const DiscreteChannel& ch, std::array<double, 2> w,
                                    const SearchConfig& cfg) {
  return maximize_weighted_rate(spec, ch, default_family(spec.id, ch), w, cfg);
}

Envelope frontier(const RegionSpec& spec, const DiscreteChannel& ch, const DistributionFamily& family,
                  const SearchConfig& cfg) {
  validate(cfg);
  PointHull hull;
  hull.add({0.0, 0.0});
  std::size_t evals = 0;
  if (cfg.exhaustive || family.num_params() == 0) {
    run(spec, ch, family, cfg.weight_sweep.front(), cfg, &hull, evals);
  } else {
    for (auto w : cfg.weight_sweep) run(spec, ch, family, w, cfg, &hull, evals);
  }
  return hull.envelope();
}

Envelope frontier(const RegionSpec& spec, const DiscreteChannel& ch, const SearchConfig& cfg) {
  return frontier(spec, ch, default_family(spec.id, ch), cfg);
}

Envelope hull_envelope(const std::vector<RatePair>& points) {
  // Downward closure: each point also contributes its axis projections.
  std::vector<RatePair> pts{{0.0, 0.0}};
  for (auto p : points) {
    RatePair q{std::max(p.r1, 0.0), std::max(p.r2, 0.0)};
    pts.push_back(q);
    pts.push_back({0.0, q.r2});
    pts.push_back({q.r1, 0.0});
  }
  std::sort(pts.begin(), pts.end(), [](RatePair a, RatePair b) { return a.r1 < b.r1 || (a.r1 == b.r1 && a.r2 > b.r2); });
  std::vector<RatePair> top;
  for (auto p : pts) {
    if (!top.empty() && top.back().r1 == p.r1) continue;  // keeps the highest point per abscissa
    while (top.size() >= 2) {
      RatePair a = top[top.size() - 2], b = top.back();
      double cross = (b.r1 - a.r1) * (p.r2 - a.r2) - (b.r2 - a.r2) * (p.r1 - a.r1);
      if (cross >= 0.0) top.pop_back();
      else break;
    }
    top.push_back(p);
  }
  std::vector<double> xs, ys;
  for (auto p : top) {
    xs.push_back(p.r1);
    ys.push_back(p.r2);
  }
  return Envelope(std::move(xs), std::move(ys));
}

}  // namespace cogrates
