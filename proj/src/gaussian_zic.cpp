#include "cogrates/gaussian_zic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "cogrates/errors.hpp"

namespace cogrates {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kDetFloor = 1e-12;
constexpr double kStepFloor = 1e-9;
constexpr std::size_t kMaxRefineEvals = 20000;
constexpr double kInnerFloor = 1e-11;
constexpr std::size_t kInnerScan = 25;
constexpr std::size_t kScanStride = 8;

void require_order(double alpha, double beta) {
  if (!(beta >= 0.0 && beta <= alpha && alpha <= 1.0))
    throw Error(ErrorCode::InvalidParameter, "need 0 <= beta <= alpha <= 1");
}

double c1(const StandardZic& c) { return gamma(c.P1); }
double c2(const StandardZic& c) { return gamma(c.P2); }

// The rate at which the cell index part is decoded at receiver 2 while X2
// and the unresolved part of X1 act as noise.
double g_beta(const StandardZic& c, double beta) {
  const double b2 = c.b * c.b;
  return gamma(b2 * beta * c.P1 / (1.0 + b2 * (1.0 - beta) * c.P1 + c.P2));
}

double half_log_ratio(double num, double den) {
  if (!(num > kDetFloor) || !(den > kDetFloor))
    throw Error(ErrorCode::NonpositiveLogArgument, "singular conditional covariance");
  return 0.5 * std::log2(num / den);
}

// Outer-bound R2 cap as a function of alpha; nonincreasing on [0, 1].
double outer_g(const StandardZic& c, double alpha) {
  const double abar = std::max(0.0, 1.0 - alpha);
  const double b2 = c.b * c.b;
  const double num = b2 * abar * c.P1 + c.P2 + 2.0 * c.b * std::sqrt(abar * c.P1 * c.P2);
  return gamma(num / (1.0 + b2 * alpha * c.P1));
}

template <std::size_t D>
using Params = std::array<double, D>;

// A region given as the union over a parameter box of slices
// {R1 <= r1, R2 <= r2, R1 + R2 <= sum}. Coordinate 0 (alpha) is searched
// on a fine 1-D grid for every setting of the others, which keeps the
// outer compass search away from the corners of the constraint A >= x.
template <std::size_t D>
struct SliceFamily {
  std::function<std::optional<SliceCaps>(const Params<D>&)> caps;
  // Lower end of coordinate 0 given the others; the upper end is 1.
  std::function<double(const Params<D>&)> alpha_floor;
  // Admissibility of coordinates 1..D-1.
  std::function<bool(const Params<D>&)> outer_feasible;
  std::function<void(const std::function<void(const Params<D>&)>&)> for_each_grid_point;
  std::size_t inner_steps = kInnerScan;
  // Scan resolution for coordinate 1 before the compass search.
  std::size_t outer_steps = 101;
  Params<D> initial_step{};
};

// Largest R1 a slice can carry while R2 >= 0 stays feasible.
double effective_r1(const SliceCaps& s) {
  if (s.r2 < 0.0) return kNegInf;
  return std::min(s.r1, s.sum);
}

// Best R2 of one slice at R1 = x, or -inf when x is out of reach.
double slice_value(const SliceCaps& s, double x) {
  const double tol = 1e-12 * std::max(1.0, std::abs(x));
  if (s.r2 < 0.0 || effective_r1(s) < x - tol) return kNegInf;
  const double v = std::min(s.r2, s.sum - x);
  return v < 0.0 ? (v > -tol ? 0.0 : kNegInf) : v;
}

template <std::size_t D, class Objective>
std::pair<Params<D>, double> inner_search(const SliceFamily<D>& fam, Params<D> p,
                                          Objective& objective) {
  const double lo = fam.alpha_floor(p);
  const double hi = 1.0;
  if (!(lo <= hi)) return {p, kNegInf};
  const double hint = p[0];
  double best = kNegInf;
  Params<D> arg = p;
  auto consider = [&](double a) {
    Params<D> q = p;
    q[0] = a;
    const double f = objective(q);
    if (f > best) {
      best = f;
      arg = q;
    }
  };
  const std::size_t n = std::max<std::size_t>(fam.inner_steps, 2);
  for (std::size_t i = 0; i < n; ++i)
    consider(i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  if (hint > lo && hint < hi) consider(hint);
  if (best == kNegInf) return {arg, best};

  double step = (hi - lo) / static_cast<double>(n - 1);
  while (step > kInnerFloor) {
    bool moved = false;
    for (double dir : {1.0, -1.0}) {
      const double a = arg[0] + dir * step;
      if (a < lo || a > hi) continue;
      Params<D> q = arg;
      q[0] = a;
      const double f = objective(q);
      if (f > best) {
        best = f;
        arg = q;
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }
  return {arg, best};
}

// Maximizes the objective from the best of several seeds: coordinate 0 by
// inner_search, the others by compass search (after an optional global scan
// of coordinate 1).
template <std::size_t D, class Objective>
std::pair<Params<D>, double> nested_search(const SliceFamily<D>& fam,
                                           const std::vector<Params<D>>& seeds, bool scan,
                                           Objective&& objective) {
  Params<D> arg = seeds.front();
  double best = kNegInf;
  for (const auto& seed : seeds) {
    auto [qa, fq] = inner_search(fam, seed, objective);
    if (fq > best) {
      arg = qa;
      best = fq;
    }
  }
  if constexpr (D == 1) {
    return {arg, best};
  } else {
    if (scan) {
      // Both from the current point and with the remaining coordinates at
      // their reference value 0.
      const std::size_t nb = std::max<std::size_t>(fam.outer_steps, 2);
      const Params<D> from = arg;
      for (int zeroed = 0; zeroed < (D > 2 ? 2 : 1); ++zeroed) {
        Params<D> q = from;
        if (zeroed)
          for (std::size_t i = 2; i < D; ++i) q[i] = 0.0;
        for (std::size_t j = 0; j < nb; ++j) {
          q[1] = static_cast<double>(j) / static_cast<double>(nb - 1);
          if (!fam.outer_feasible(q)) continue;
          auto [qa, fq] = inner_search(fam, q, objective);
          if (fq > best) {
            arg = qa;
            best = fq;
          }
        }
      }
    }
    if (best == kNegInf) return {arg, best};

    constexpr std::size_t M = D - 1;
    std::vector<Params<M>> dirs;
    std::size_t total = 1;
    for (std::size_t i = 0; i < M; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      Params<M> d{};
      std::size_t rest = code;
      bool nonzero = false;
      for (std::size_t i = 0; i < M; ++i) {
        d[i] = static_cast<double>(static_cast<int>(rest % 3) - 1);
        rest /= 3;
        nonzero = nonzero || d[i] != 0.0;
      }
      if (nonzero) dirs.push_back(d);
    }
    Params<M> step;
    for (std::size_t i = 0; i < M; ++i) step[i] = fam.initial_step[i + 1];
    std::size_t evals = 0;
    auto largest = [&] { return *std::max_element(step.begin(), step.end()); };
    while (largest() > kStepFloor && evals < kMaxRefineEvals) {
      bool moved = false;
      for (const auto& d : dirs) {
        Params<D> q = arg;
        for (std::size_t i = 0; i < M; ++i) q[i + 1] += d[i] * step[i];
        if (!fam.outer_feasible(q)) continue;
        ++evals;
        auto [qa, fq] = inner_search(fam, q, objective);
        if (fq > best) {
          arg = qa;
          best = fq;
          moved = true;
          break;
        }
      }
      if (!moved)
        for (double& s : step) s *= 0.5;
    }
    return {arg, best};
  }
}

template <std::size_t D>
Envelope sweep(const SliceFamily<D>& fam, const SweepGrid& g) {
  // Pass 1: the reach in R1 of the grid slices.
  double r1_top = kNegInf;
  Params<D> r1_arg{};
  fam.for_each_grid_point([&](const Params<D>& p) {
    auto s = fam.caps(p);
    if (!s) return;
    const double a = effective_r1(*s);
    if (a > r1_top) {
      r1_top = a;
      r1_arg = p;
    }
  });
  if (!(r1_top >= 0.0)) return Envelope::origin();

  if (g.refine) {
    auto reach = [&](const Params<D>& p) {
      auto s = fam.caps(p);
      return s ? effective_r1(*s) : kNegInf;
    };
    std::tie(r1_arg, r1_top) = nested_search(fam, {r1_arg}, true, reach);
  }
  const SliceCaps top_caps = *fam.caps(r1_arg);

  const auto xs = make_r1_grid(r1_top, g.r1_samples, g.extra_r1);
  const std::size_t n = xs.size();
  std::vector<double> best(n, kNegInf);
  std::vector<Params<D>> arg(n);
  std::vector<double> flat(n, kNegInf);
  std::vector<Params<D>> flat_arg(n);

  auto last_index_at_most = [&](double x) -> std::ptrdiff_t {
    const double tol = 1e-12 * std::max(1.0, std::abs(x));
    auto it = std::upper_bound(xs.begin(), xs.end(), x + tol);
    return static_cast<std::ptrdiff_t>(it - xs.begin()) - 1;
  };

  // Pass 2: each slice is flat at r2 up to min(reach, sum - r2) and then
  // follows the sum row down to its reach.
  fam.for_each_grid_point([&](const Params<D>& p) {
    auto s = fam.caps(p);
    if (!s) return;
    const double reach = effective_r1(*s);
    if (!(reach >= 0.0)) return;
    const double knee = std::min(reach, s->sum - s->r2);
    const std::ptrdiff_t kk = last_index_at_most(knee);
    if (kk >= 0 && s->r2 > flat[kk]) {
      flat[kk] = s->r2;
      flat_arg[kk] = p;
    }
    if (std::isfinite(s->sum)) {
      const std::ptrdiff_t kr = last_index_at_most(reach);
      for (std::ptrdiff_t k = kk + 1; k <= kr; ++k) {
        const double v = std::min(s->r2, s->sum - xs[k]);
        if (v > best[k]) {
          best[k] = v;
          arg[k] = p;
        }
      }
    }
  });
  double run = kNegInf;
  Params<D> run_arg{};
  for (std::size_t k = n; k-- > 0;) {
    if (flat[k] > run) {
      run = flat[k];
      run_arg = flat_arg[k];
    }
    if (run > best[k]) {
      best[k] = run;
      arg[k] = run_arg;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double v = slice_value(top_caps, xs[k]);
    if (v > best[k]) {
      best[k] = v;
      arg[k] = r1_arg;
    }
  }

  if (g.refine) {
    // Continuation along the R1 grid: each sample starts from its best grid
    // slice, the widest slice and its left neighbour's optimum, with a full
    // scan every few samples; a backward pass then lets every optimum seed
    // its left neighbour as well.
    std::vector<Params<D>> opt = arg;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = xs[k];
      auto objective = [&](const Params<D>& p) {
        auto s = fam.caps(p);
        return s ? slice_value(*s, x) : kNegInf;
      };
      std::vector<Params<D>> seeds{arg[k], r1_arg};
      if (k > 0) seeds.push_back(opt[k - 1]);
      const bool scan = k % kScanStride == 0 || k + 1 == n;
      auto [pa, f] = nested_search(fam, seeds, scan, objective);
      if (f > best[k]) {
        best[k] = f;
        opt[k] = pa;
      }
    }
    for (std::size_t k = n - 1; k-- > 0;) {
      const double x = xs[k];
      auto objective = [&](const Params<D>& p) {
        auto s = fam.caps(p);
        return s ? slice_value(*s, x) : kNegInf;
      };
      if (objective(opt[k + 1]) == kNegInf) continue;
      auto [pa, f] = nested_search(fam, {opt[k + 1]}, false, objective);
      if (f > best[k]) {
        best[k] = f;
        opt[k] = pa;
      }
    }
  }

  for (double& v : best) v = std::max(v, 0.0);
  return Envelope(xs, std::move(best));
}

std::size_t at_least_two(std::size_t n) { return std::max<std::size_t>(n, 2); }

double grid_value(std::size_t i, std::size_t steps) {
  return static_cast<double>(i) / static_cast<double>(steps - 1);
}

void for_each_alpha_beta(const SweepGrid& g, const std::function<void(double, double)>& f) {
  const std::size_t na = at_least_two(g.alpha_steps);
  const std::size_t nb = at_least_two(g.beta_steps);
  for (std::size_t i = 0; i < na; ++i) {
    const double alpha = grid_value(i, na);
    for (std::size_t j = 0; j < nb; ++j) {
      const double beta = grid_value(j, nb);
      if (beta > alpha + 1e-15) break;
      f(alpha, std::min(beta, alpha));
    }
  }
}


}  // namespace

double gamma(double x) {
  if (x < 0.0 || std::isnan(x)) throw Error(ErrorCode::NegativeArgument, "gamma of a negative value");
  return 0.5 * std::log2(1.0 + x);
}

void validate(const StandardZic& c) {
  for (double v : {c.P1, c.P2, c.K, c.b}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidParameter, "channel parameters must be finite");
    if (v < 0.0) throw Error(ErrorCode::NegativeArgument, "channel parameters must be nonnegative");
  }
  if (c.K > kMaxCognitiveGain)
    throw Error(ErrorCode::InvalidParameter, "K above 1e6 is not supported; use region_r2 for the K -> infinity limit");
}

StandardZic standardize(const PhysicalZic& p) {
  for (double h : {p.h11, p.h12, p.h13, p.h23}) {
    if (h == 0.0) throw Error(ErrorCode::ZeroGain, "channel gains must be positive");
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidParameter, "channel gains must be positive");
  }
  for (double n : {p.N1, p.N2, p.N3})
    if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::InvalidParameter, "noise variances must be positive");
  if (p.P1p < 0.0 || p.P2p < 0.0) throw Error(ErrorCode::NegativeArgument, "powers must be nonnegative");
  StandardZic c;
  c.P1 = p.h11 * p.h11 * p.P1p / p.N1;
  c.P2 = p.h23 * p.h23 * p.P2p / p.N3;
  c.K = (p.h12 / p.h11) * std::sqrt(p.N1 / p.N2);
  c.b = (p.h13 / p.h11) * std::sqrt(p.N1 / p.N3);
  validate(c);
  return c;
}

HalfPlaneSystem region_r1_system(const StandardZic& c) {
  validate(c);
  if (c.b < 1.0) throw Error(ErrorCode::WeakInterference, "the pentagon is a capacity region only for b >= 1");
  HalfPlaneSystem sys({"R1", "R2"});
  sys.add_row({1.0, 0.0}, c1(c));
  sys.add_row({0.0, 1.0}, c2(c));
  sys.add_row({1.0, 1.0}, gamma(c.b * c.b * c.P1 + c.P2));
  return sys;
}

Envelope region_r1(const StandardZic& c, std::size_t samples, const std::vector<double>& extra_r1) {
  return envelope_from_halfplanes(region_r1_system(c), samples, extra_r1);
}

Envelope region_r2(const StandardZic& c) {
  validate(c);
  return Envelope::rectangle(c1(c), c2(c));
}

double zic_sum_capacity(const StandardZic& c) {
  validate(c);
  if (c.b >= 1.0) throw Error(ErrorCode::StrongInterference, "sum capacity formula needs b < 1");
  return gamma(c.P1) + gamma(c.P2 / (1.0 + c.b * c.b * c.P1));
}

SliceCaps r3_slice(const StandardZic& c, double alpha, double beta) {
  require_order(alpha, beta);
  const double K2 = c.K * c.K;
  const double gb = g_beta(c, beta);
  SliceCaps s;
  s.r1 = std::min({gamma(K2 * alpha * c.P1), gamma(c.P1), gamma(K2 * (alpha - beta) * c.P1) + gb,
                   gamma((1.0 - beta) * c.P1) + gb});
  s.r2 = gamma(c.P2 / (1.0 + c.b * c.b * (alpha - beta) * c.P1));
  s.sum = kInf;
  return s;
}

HalfPlaneSystem r3_slice_system(const StandardZic& c, double alpha, double beta) {
  validate(c);
  require_order(alpha, beta);
  const double K2 = c.K * c.K;
  const double gb = g_beta(c, beta);
  HalfPlaneSystem sys({"R1", "R2"});
  sys.add_row({1.0, 0.0}, gamma(K2 * alpha * c.P1));
  sys.add_row({1.0, 0.0}, gamma(c.P1));
  sys.add_row({1.0, 0.0}, gamma(K2 * (alpha - beta) * c.P1) + gb);
  sys.add_row({1.0, 0.0}, gamma((1.0 - beta) * c.P1) + gb);
  sys.add_row({0.0, 1.0}, gamma(c.P2 / (1.0 + c.b * c.b * (alpha - beta) * c.P1)));
  return sys;
}

Envelope region_r3(const StandardZic& c, const SweepGrid& g) {
  validate(c);
  SliceFamily<2> fam;
  fam.caps = [&](const Params<2>& p) -> std::optional<SliceCaps> { return r3_slice(c, p[0], p[1]); };
  fam.alpha_floor = [](const Params<2>& p) { return p[1]; };
  fam.outer_feasible = [](const Params<2>& p) { return p[1] >= 0.0 && p[1] <= 1.0; };
  fam.inner_steps = kInnerScan;
  fam.outer_steps = at_least_two(g.beta_steps);
  fam.for_each_grid_point = [&](const std::function<void(const Params<2>&)>& f) {
    for_each_alpha_beta(g, [&](double a, double b) { f({a, b}); });
  };
  fam.initial_step = {1.0 / static_cast<double>(at_least_two(g.alpha_steps) - 1),
                      1.0 / static_cast<double>(at_least_two(g.beta_steps) - 1)};
  return sweep(fam, g);
}

HalfPlaneSystem zic_rate_system(const StandardZic& c, double alpha, double beta) {
  validate(c);
  require_order(alpha, beta);
  const double K2 = c.K * c.K;
  const double P1 = c.P1;
  HalfPlaneSystem sys({"R1", "R2", "R11", "R12", "R0"});
  // Decoding of the fresh and resolution parts at the cognitive relay.
  sys.add_row_named({{"R11", 1.0}}, gamma(K2 * (alpha - beta) * P1));
  sys.add_row_named({{"R12", 1.0}}, gamma(K2 * beta * P1));
  sys.add_row_named({{"R11", 1.0}, {"R12", 1.0}}, gamma(K2 * alpha * P1));
  // Primary receiver, backward decoding over the block-Markov chain.
  sys.add_row_named({{"R12", 1.0}}, gamma(beta * P1 / ((1.0 - beta) * P1 + 1.0)));
  sys.add_row_named({{"R0", 1.0}}, gamma((1.0 - alpha) * P1 / (1.0 + (alpha - beta) * P1)));
  sys.add_row_named({{"R11", 1.0}, {"R0", -1.0}}, gamma((alpha - beta) * P1));
  sys.add_row_named({{"R11", 1.0}}, gamma((1.0 - beta) * P1));
  // Secondary receiver.
  sys.add_row_named({{"R12", 1.0}}, g_beta(c, beta));
  sys.add_row_named({{"R2", 1.0}}, gamma(c.P2 / (1.0 + c.b * c.b * (alpha - beta) * P1)));
  sys.add_equality({{"R1", 1.0}, {"R11", -1.0}, {"R12", -1.0}}, 0.0);
  for (const char* v : {"R11", "R12", "R0", "R2"}) sys.add_row_named({{v, -1.0}}, 0.0);
  return sys;
}

Zeta zeta(const StandardZic& c, double alpha, double beta, double mu) {
  require_order(alpha, beta);
  if (!std::isfinite(mu)) throw Error(ErrorCode::InvalidParameter, "mu must be finite");
  const double P1 = c.P1, P2 = c.P2, b = c.b, b2 = c.b * c.b;
  if (P2 == 0.0) {
    // Limit P2 -> 0: X2 carries nothing and only the cell index remains.
    const double gb = g_beta(c, beta);
    return {gb, 0.0, gb};
  }
  const double abar = 1.0 - alpha;
  const double bbar = 1.0 - beta;
  const double su = P2 + mu * mu * abar * P1;
  const double cross = P2 + mu * b * abar * P1;
  const double det = su * (P2 + b2 * bbar * P1 + 1.0) - cross * cross;
  Zeta z;
  z.z1 = half_log_ratio(su * (P2 + b2 * P1 + 1.0) - cross * cross, det);
  z.z2 = half_log_ratio(P2 * (P2 + b2 * bbar * P1 + 1.0), det);
  z.z3 = half_log_ratio(P2 * (P2 + b2 * P1 + 1.0), det);
  return z;
}

double costa_mu(const StandardZic& c, double alpha, double beta) {
  require_order(alpha, beta);
  return c.b * c.P2 / (c.P2 + 1.0 + c.b * c.b * (alpha - beta) * c.P1);
}

std::optional<SliceCaps> r4_slice(const StandardZic& c, double alpha, double beta, double mu) {
  Zeta z;
  try {
    z = zeta(c, alpha, beta, mu);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonpositiveLogArgument) return std::nullopt;
    throw;
  }
  const double K2 = c.K * c.K;
  const double P1 = c.P1;
  const double head = gamma(K2 * (alpha - beta) * P1);
  const double tail = gamma((1.0 - beta) * P1);
  SliceCaps s;
  s.r1 = std::min({gamma(K2 * alpha * P1), gamma(P1), head + gamma(beta * P1), head + z.z1, tail + z.z1});
  s.r2 = z.z2;
  s.sum = std::min(head + z.z3, tail + z.z3);
  return s;
}

Envelope region_r4(const StandardZic& c, const SweepGrid& g) {
  validate(c);
  const std::size_t nm = at_least_two(g.mu_steps);
  // The third coordinate is mu measured from the dirty-paper coefficient,
  // so moving alpha or beta keeps the R2 row tuned.
  SliceFamily<3> fam;
  fam.caps = [&](const Params<3>& p) { return r4_slice(c, p[0], p[1], costa_mu(c, p[0], p[1]) + p[2]); };
  fam.alpha_floor = [](const Params<3>& p) { return p[1]; };
  fam.outer_feasible = [](const Params<3>& p) { return p[1] >= 0.0 && p[1] <= 1.0; };
  fam.inner_steps = kInnerScan;
  fam.outer_steps = at_least_two(g.beta_steps);
  fam.for_each_grid_point = [&](const std::function<void(const Params<3>&)>& f) {
    for_each_alpha_beta(g, [&](double a, double b) {
      const double mc = costa_mu(c, a, b);
      for (std::size_t k = 0; k < nm; ++k) f({a, b, -g.mu_range + 2.0 * g.mu_range * grid_value(k, nm) - mc});
      if (g.include_costa_candidate) f({a, b, 0.0});
    });
  };
  fam.initial_step = {1.0 / static_cast<double>(at_least_two(g.alpha_steps) - 1),
                      1.0 / static_cast<double>(at_least_two(g.beta_steps) - 1),
                      2.0 * g.mu_range / static_cast<double>(nm - 1)};
  return sweep(fam, g);
}

SliceCaps r5_slice(const StandardZic& c, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidParameter, "alpha must lie in [0, 1]");
  const double b2 = c.b * c.b;
  SliceCaps s;
  s.r1 = gamma(alpha * c.P1) + gamma(b2 * (1.0 - alpha) * c.P1 / (1.0 + b2 * alpha * c.P1 + c.P2));
  s.r2 = gamma(c.P2 / (1.0 + b2 * alpha * c.P1));
  s.sum = kInf;
  return s;
}

Envelope region_r5(const StandardZic& c, const SweepGrid& g) {
  validate(c);
  if (c.b > 1.0) throw Error(ErrorCode::StrongInterference, "the HK region with these splits needs b <= 1");
  SliceFamily<1> fam;
  fam.caps = [&](const Params<1>& p) -> std::optional<SliceCaps> { return r5_slice(c, p[0]); };
  const std::size_t na = at_least_two(g.alpha_steps);
  fam.alpha_floor = [](const Params<1>&) { return 0.0; };
  fam.outer_feasible = [](const Params<1>&) { return true; };
  fam.inner_steps = na;
  fam.for_each_grid_point = [&](const std::function<void(const Params<1>&)>& f) {
    for (std::size_t i = 0; i < na; ++i) f({grid_value(i, na)});
  };
  fam.initial_step = {1.0 / static_cast<double>(na - 1)};
  return sweep(fam, g);
}

SliceCaps outer_slice(const StandardZic& c, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidParameter, "alpha must lie in [0, 1]");
  SliceCaps s;
  s.r1 = std::min(c1(c), gamma(c.K * c.K * alpha * c.P1));
  s.r2 = std::min(c2(c), outer_g(c, alpha));
  s.sum = kInf;
  return s;
}

namespace {
void require_outer_regime(const StandardZic& c) {
  validate(c);
  if (c.b > 1.0 || c.K < 1.0) throw Error(ErrorCode::ParameterRegime, "outer bound needs b <= 1 and K >= 1");
}
}  // namespace

Envelope outer_bound_gaussian(const StandardZic& c, const SweepGrid& g) {
  require_outer_regime(c);
  const double top = c1(c);
  const auto xs = make_r1_grid(top, g.r1_samples, g.extra_r1);
  std::vector<double> vals(xs.size());
  const double K2P1 = c.K * c.K * c.P1;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    // Smallest alpha whose box reaches R1 = x; G is nonincreasing in alpha.
    double alpha = K2P1 > 0.0 ? (std::exp2(2.0 * xs[i]) - 1.0) / K2P1 : 0.0;
    alpha = std::clamp(alpha, 0.0, 1.0);
    vals[i] = std::min(c2(c), outer_g(c, alpha));
  }
  return Envelope(xs, std::move(vals));
}

std::vector<RatePair> outer_bound_tradeoff(const StandardZic& c, std::size_t steps) {
  require_outer_regime(c);
  steps = at_least_two(steps);
  std::vector<RatePair> out;
  out.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const auto s = outer_slice(c, grid_value(i, steps));
    out.push_back({s.r1, s.r2});
  }
  return out;
}

double r1_subset_r3_k_threshold(const StandardZic& c) {
  validate(c);
  const double b2 = c.b * c.b;
  if (b2 < 1.0) throw Error(ErrorCode::WeakInterference, "threshold is defined for b >= 1");
  const double den = 1.0 + c.P2 - b2;
  if (den <= 0.0) throw Error(ErrorCode::RegimeBoundary, "b^2 >= 1 + P2: threshold undefined");
  return c.b * std::sqrt(((b2 - 1.0) * c.P1 + c.P2) / den);
}

RatePair corner_point(const StandardZic& c) {
  validate(c);
  return {gamma(c.b * c.b * c.P1 / (1.0 + c.P2)), c2(c)};
}

RatePair corollary_point(const StandardZic& c) {
  validate(c);
  return {c1(c), gamma(c.P2 / (1.0 + c.b * c.b * c.P1))};
}

}  // namespace cogrates
