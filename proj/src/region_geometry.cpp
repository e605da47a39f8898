#include "cogrates/region_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "cogrates/errors.hpp"

namespace cogrates {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-9;

double jump_offset(double x) { return 1e-9 * std::max(1.0, std::abs(x)); }

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::InvalidSystem, std::string("non-finite ") + what);
  }
}

double row_scale(const HalfPlaneSystem::Row& row) {
  double s = 0.0;
  for (double c : row.coeffs) s = std::max(s, std::abs(c));
  return s;
}

// Rows of a system over {R1, R2} reordered to (a1, a2, c).
struct Row2 {
  double a1, a2, c;
};

std::vector<Row2> rows_in_rate_order(const HalfPlaneSystem& sys) {
  if (sys.num_vars() != 2) {
    throw Error(ErrorCode::InvalidSystem, "expected a system over exactly R1 and R2");
  }
  const auto i1 = sys.index_of("R1");
  const auto i2 = sys.index_of("R2");
  if (!i1 || !i2) {
    throw Error(ErrorCode::InvalidSystem, "expected variables named R1 and R2");
  }
  std::vector<Row2> out;
  out.reserve(sys.num_rows());
  for (const auto& row : sys.rows()) {
    double s = row_scale(row);
    if (s == 0.0) {
      out.push_back({0.0, 0.0, row.rhs});
      continue;
    }
    out.push_back({row.coeffs[*i1] / s, row.coeffs[*i2] / s, row.rhs / s});
  }
  return out;
}

bool feasible2(const std::vector<Row2>& rows, double x, double y) {
  if (x < -kFeasTol || y < -kFeasTol) return false;
  for (const auto& r : rows) {
    if (r.a1 * x + r.a2 * y - r.c > kFeasTol * (1.0 + std::abs(r.c))) return false;
  }
  return true;
}

// Whether some nonzero direction d >= 0 satisfies a.d <= 0 for every row.
bool has_recession_direction(const std::vector<Row2>& rows) {
  // d = (1, t) with t >= 0, then d = (s, 1) with s >= 0.
  for (int axis = 0; axis < 2; ++axis) {
    double lo = 0.0, hi = kInf;
    bool ok = true;
    for (const auto& r : rows) {
      double fixed = axis == 0 ? r.a1 : r.a2;
      double slope = axis == 0 ? r.a2 : r.a1;
      if (std::abs(slope) < 1e-14) {
        if (fixed > 1e-14) ok = false;
      } else if (slope > 0) {
        hi = std::min(hi, -fixed / slope);
      } else {
        lo = std::max(lo, -fixed / slope);
      }
    }
    if (ok && lo <= hi) return true;
  }
  return false;
}

std::vector<double> merged_points(const Envelope& a, const Envelope& b, double upto) {
  std::vector<double> xs;
  xs.reserve(a.size() + b.size());
  for (double x : a.r1_grid())
    if (x <= upto) xs.push_back(x);
  for (double x : b.r1_grid())
    if (x <= upto) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

// Points strictly inside consecutive merged breakpoints where a - b changes sign.
void add_crossings(const Envelope& a, const Envelope& b, std::vector<double>& xs) {
  std::vector<double> extra;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    double x0 = xs[i], x1 = xs[i + 1];
    double d0 = a.value_at(x0) - b.value_at(x0);
    double d1 = a.value_at(x1) - b.value_at(x1);
    if ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0)) {
      double x = x0 + (x1 - x0) * d0 / (d0 - d1);
      if (x > x0 && x < x1) extra.push_back(x);
    }
  }
  xs.insert(xs.end(), extra.begin(), extra.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

HalfPlaneSystem::HalfPlaneSystem(std::vector<std::string> vars) : vars_(std::move(vars)) {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    for (std::size_t j = i + 1; j < vars_.size(); ++j) {
      if (vars_[i] == vars_[j]) {
        throw Error(ErrorCode::InvalidSystem, "duplicate variable " + vars_[i]);
      }
    }
  }
}

std::optional<std::size_t> HalfPlaneSystem::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return i;
  return std::nullopt;
}

std::size_t HalfPlaneSystem::require_index(const std::string& name) const {
  auto i = index_of(name);
  if (!i) throw Error(ErrorCode::UnknownVariable, "variable " + name + " not in system");
  return *i;
}

void HalfPlaneSystem::add_row(std::vector<double> coeffs, double rhs) {
  if (coeffs.size() != vars_.size()) {
    throw Error(ErrorCode::InvalidSystem, "coefficient count does not match variable count");
  }
  for (double c : coeffs) check_finite(c, "coefficient");
  check_finite(rhs, "right-hand side");
  rows_.push_back({std::move(coeffs), rhs});
}

void HalfPlaneSystem::add_row_named(const std::map<std::string, double>& coeffs, double rhs) {
  std::vector<double> v(vars_.size(), 0.0);
  for (const auto& [name, c] : coeffs) v[require_index(name)] += c;
  add_row(std::move(v), rhs);
}

void HalfPlaneSystem::add_equality(const std::map<std::string, double>& coeffs, double rhs) {
  add_row_named(coeffs, rhs);
  std::map<std::string, double> neg;
  for (const auto& [name, c] : coeffs) neg[name] = -c;
  add_row_named(neg, -rhs);
}

double HalfPlaneSystem::max_violation(std::span<const double> x) const {
  double worst = -kInf;
  for (const auto& row : rows_) {
    double s = 0.0;
    for (std::size_t i = 0; i < row.coeffs.size(); ++i) s += row.coeffs[i] * x[i];
    worst = std::max(worst, s - row.rhs);
  }
  return worst;
}

bool HalfPlaneSystem::contains(std::span<const double> x, double tol) const {
  return rows_.empty() || max_violation(x) <= tol;
}

Envelope::Envelope(std::vector<double> r1_grid, std::vector<double> r2_values)
    : r1_(std::move(r1_grid)), r2_(std::move(r2_values)) {
  if (r1_.empty() || r1_.size() != r2_.size()) {
    throw Error(ErrorCode::InvalidEnvelope, "grid and values must be non-empty and equally long");
  }
  if (r1_.front() != 0.0) throw Error(ErrorCode::InvalidEnvelope, "grid must start at 0");
  for (std::size_t i = 0; i < r1_.size(); ++i) {
    if (!std::isfinite(r1_[i]) || !std::isfinite(r2_[i])) {
      throw Error(ErrorCode::InvalidEnvelope, "non-finite sample");
    }
    if (i > 0 && !(r1_[i] > r1_[i - 1])) {
      throw Error(ErrorCode::InvalidEnvelope, "grid must be strictly ascending");
    }
    if (r2_[i] < -1e-12) throw Error(ErrorCode::InvalidEnvelope, "negative rate sample");
    r2_[i] = std::max(r2_[i], 0.0);
  }
  for (std::size_t i = r2_.size() - 1; i-- > 0;) r2_[i] = std::max(r2_[i], r2_[i + 1]);
}

Envelope Envelope::origin() { return Envelope({0.0}, {0.0}); }

Envelope Envelope::rectangle(double r1_max, double r2_max) {
  if (r1_max <= 0.0) return Envelope({0.0}, {r2_max});
  return Envelope({0.0, r1_max}, {r2_max, r2_max});
}

double Envelope::value_at(double r1) const {
  if (r1 > r1_.back()) return -kInf;
  if (r1 <= 0.0) return r2_.front();
  auto it = std::upper_bound(r1_.begin(), r1_.end(), r1);
  if (it == r1_.end()) return r2_.back();
  std::size_t j = static_cast<std::size_t>(it - r1_.begin());
  std::size_t i = j - 1;
  double t = (r1 - r1_[i]) / (r1_[j] - r1_[i]);
  return r2_[i] + t * (r2_[j] - r2_[i]);
}

bool Envelope::contains(RatePair p, double tol) const {
  if (p.r1 < -tol || p.r2 < -tol) return false;
  if (p.r1 > r1_max() + tol) return false;
  return p.r2 <= value_at(std::min(p.r1, r1_max())) + tol;
}

std::vector<double> make_r1_grid(double r1_max, std::size_t samples, std::span<const double> extra) {
  if (!(r1_max > 0.0)) return {0.0};
  samples = std::max<std::size_t>(samples, 2);
  std::vector<double> xs;
  xs.reserve(samples + extra.size());
  for (std::size_t i = 0; i < samples; ++i) {
    xs.push_back(r1_max * static_cast<double>(i) / static_cast<double>(samples - 1));
  }
  for (double x : extra)
    if (x > 0.0 && x < r1_max) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  out.reserve(xs.size());
  const double gap = 1e-12 * std::max(1.0, r1_max);
  for (double x : xs) {
    if (out.empty() || x - out.back() > gap) out.push_back(x);
  }
  out.front() = 0.0;
  if (out.back() != r1_max) {
    if (r1_max - out.back() > gap) {
      out.push_back(r1_max);
    } else {
      out.back() = r1_max;
    }
  }
  return out;
}

std::vector<RatePair> polygon_vertices(const HalfPlaneSystem& sys) {
  auto rows = rows_in_rate_order(sys);
  std::vector<Row2> lines = rows;
  lines.push_back({-1.0, 0.0, 0.0});
  lines.push_back({0.0, -1.0, 0.0});
  std::vector<RatePair> pts;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const auto& p = lines[i];
      const auto& q = lines[j];
      double det = p.a1 * q.a2 - p.a2 * q.a1;
      if (std::abs(det) < 1e-14) continue;
      double x = (p.c * q.a2 - p.a2 * q.c) / det;
      double y = (p.a1 * q.c - p.c * q.a1) / det;
      if (!feasible2(rows, x, y)) continue;
      x = std::max(x, 0.0);
      y = std::max(y, 0.0);
      bool dup = false;
      for (const auto& v : pts) {
        if (std::abs(v.r1 - x) < 1e-10 && std::abs(v.r2 - y) < 1e-10) {
          dup = true;
          break;
        }
      }
      if (!dup) pts.push_back({x, y});
    }
  }
  if (pts.size() < 3) return pts;
  double cx = 0.0, cy = 0.0;
  for (const auto& v : pts) {
    cx += v.r1;
    cy += v.r2;
  }
  cx /= static_cast<double>(pts.size());
  cy /= static_cast<double>(pts.size());
  std::sort(pts.begin(), pts.end(), [&](const RatePair& u, const RatePair& v) {
    return std::atan2(u.r2 - cy, u.r1 - cx) < std::atan2(v.r2 - cy, v.r1 - cx);
  });
  return pts;
}

Envelope envelope_from_halfplanes(const HalfPlaneSystem& sys, std::size_t samples,
                                  std::span<const double> extra_r1) {
  auto rows = rows_in_rate_order(sys);
  if (!feasible2(rows, 0.0, 0.0)) {
    throw Error(ErrorCode::InfeasibleSystem, "the origin violates a row (negative right-hand side)");
  }
  if (has_recession_direction(rows)) {
    throw Error(ErrorCode::UnboundedRegion, "rate region is unbounded");
  }
  auto verts = polygon_vertices(sys);
  double r1_max = 0.0;
  std::vector<double> kinks;
  for (const auto& v : verts) {
    r1_max = std::max(r1_max, v.r1);
    kinks.push_back(v.r1);
  }
  kinks.insert(kinks.end(), extra_r1.begin(), extra_r1.end());
  auto grid = make_r1_grid(r1_max, samples, kinks);
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double upper = kInf;
    for (const auto& r : rows) {
      if (r.a2 > 1e-12) upper = std::min(upper, (r.c - r.a1 * grid[i]) / r.a2);
    }
    vals[i] = std::max(upper, 0.0);
  }
  return Envelope(std::move(grid), std::move(vals));
}

Envelope union_of(const Envelope& a, const Envelope& b) {
  const double A = a.r1_max(), B = b.r1_max();
  const double L = std::max(A, B), m = std::min(A, B);
  auto xs = merged_points(a, b, L);
  {
    std::vector<double> common;
    for (double x : xs)
      if (x <= m) common.push_back(x);
    add_crossings(a, b, common);
    for (double x : common) xs.push_back(x);
  }
  if (A != B) {
    const Envelope& shorter = A < B ? a : b;
    const Envelope& longer = A < B ? b : a;
    double x = m + jump_offset(m);
    if (shorter.value_at(m) > longer.value_at(m) && x < L) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> vals(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) vals[i] = std::max(a.value_at(xs[i]), b.value_at(xs[i]));
  return Envelope(std::move(xs), std::move(vals));
}

Envelope intersection_of(const Envelope& a, const Envelope& b) {
  const double m = std::min(a.r1_max(), b.r1_max());
  auto xs = merged_points(a, b, m);
  add_crossings(a, b, xs);
  std::vector<double> vals(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) vals[i] = std::min(a.value_at(xs[i]), b.value_at(xs[i]));
  return Envelope(std::move(xs), std::move(vals));
}

Envelope convex_hull(const Envelope& a) {
  auto xs = a.r1_grid();
  auto ys = a.r2_max();
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (hull.size() >= 2) {
      std::size_t o = hull[hull.size() - 2], p = hull.back();
      double cross = (xs[p] - xs[o]) * (ys[i] - ys[o]) - (ys[p] - ys[o]) * (xs[i] - xs[o]);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }
  std::vector<double> grid(xs.begin(), xs.end());
  std::vector<double> vals(xs.size());
  std::size_t seg = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (seg + 1 < hull.size() && xs[hull[seg + 1]] < xs[i]) ++seg;
    if (seg + 1 >= hull.size()) {
      vals[i] = ys[hull.back()];
      continue;
    }
    std::size_t l = hull[seg], r = hull[seg + 1];
    double t = (xs[i] - xs[l]) / (xs[r] - xs[l]);
    vals[i] = std::max(ys[i], ys[l] + t * (ys[r] - ys[l]));
  }
  return Envelope(std::move(grid), std::move(vals));
}

SubsetResult subset(const Envelope& a, const Envelope& b, double tol) {
  const double m = std::min(a.r1_max(), b.r1_max());
  auto xs = merged_points(a, b, m);
  double worst = a.r1_max() - b.r1_max();
  for (double x : xs) worst = std::max(worst, a.value_at(x) - b.value_at(x));
  if (worst <= tol) return {true, worst};
  // Containment in b grown by tol along both axes. Near a vertical edge of
  // b the pointwise r2 excess can be large although a is only tol away.
  const double lim = std::min(a.r1_max(), b.r1_max() + tol);
  double grown = a.r1_max() - b.r1_max() - tol;
  std::vector<double> pts{0.0, lim};
  for (double x : a.r1_grid())
    if (x <= lim) pts.push_back(x);
  for (double x : b.r1_grid())
    if (x + tol <= lim) pts.push_back(x + tol);
  for (double x : pts) grown = std::max(grown, a.value_at(x) - b.value_at(std::max(x - tol, 0.0)) - tol);
  return {grown <= 0.0, worst};
}

double max_deviation(const Envelope& a, const Envelope& b) {
  const double m = std::min(a.r1_max(), b.r1_max());
  auto xs = merged_points(a, b, m);
  double worst = std::abs(a.r1_max() - b.r1_max());
  for (double x : xs) worst = std::max(worst, std::abs(a.value_at(x) - b.value_at(x)));
  return worst;
}

double polygon_excess(const HalfPlaneSystem& a, const HalfPlaneSystem& b) {
  auto va = polygon_vertices(a);
  if (va.empty()) return 0.0;
  if (polygon_vertices(b).empty()) return kInf;
  auto rows = rows_in_rate_order(b);
  double worst = 0.0;
  for (const auto& p : va) {
    worst = std::max({worst, -p.r1, -p.r2});
    for (const auto& r : rows) worst = std::max(worst, r.a1 * p.r1 + r.a2 * p.r2 - r.c);
  }
  return worst;
}

double polygon_distance(const HalfPlaneSystem& a, const HalfPlaneSystem& b) {
  bool ea = polygon_vertices(a).empty(), eb = polygon_vertices(b).empty();
  if (ea && eb) return 0.0;
  if (ea || eb) return kInf;
  return std::max(polygon_excess(a, b), polygon_excess(b, a));
}

void write_envelope_csv(std::ostream& out, const Envelope& e) {
  out << "r1,r2\n";
  for (std::size_t i = 0; i < e.size(); ++i) {
    out << format_g12(e.r1_grid()[i]) << ',' << format_g12(e.r2_max()[i]) << '\n';
  }
}

std::string envelope_to_csv(const Envelope& e) {
  std::ostringstream os;
  write_envelope_csv(os, e);
  return os.str();
}

Envelope read_envelope_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty envelope CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "r1,r2") throw Error(ErrorCode::ParseError, "expected header r1,r2");
  std::vector<double> xs, ys;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": missing comma");
    }
    try {
      std::size_t used = 0;
      double x = std::stod(line.substr(0, comma), &used);
      double y = std::stod(line.substr(comma + 1), &used);
      xs.push_back(x);
      ys.push_back(y);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": not a number");
    }
  }
  try {
    return Envelope(std::move(xs), std::move(ys));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace cogrates
