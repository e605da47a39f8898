#include "cogrates/polytope_fm.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <json.hpp>

#include "cogrates/errors.hpp"
#include "cogrates/linear_program.hpp"

namespace cogrates {

namespace {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

template <class T>
struct Num;

template <>
struct Num<double> {
  static double zero_tol() { return 1e-12; }
  static double pivot_eps() { return 1e-11; }
  static double implied_tol() { return 1e-10; }
  static double from(double v) { return v; }
  static double to_double(double v) { return v; }
};

template <>
struct Num<Rational> {
  static Rational zero_tol() { return Rational(0); }
  static Rational pivot_eps() { return Rational(0); }
  static Rational implied_tol() { return Rational(0); }
  static Rational from(double v) { return Rational(v); }
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
};

template <class T>
struct Row {
  std::vector<T> a;
  T c;
};

template <class T>
struct System {
  std::vector<std::string> vars;
  std::vector<Row<T>> rows;
};

// Scales a row so its largest coefficient has magnitude one. Returns false
// for rows without any coefficient above the zero threshold; such rows are
// either dropped (trivially true) or replaced by the marker 0 <= -1.
template <class T>
bool normalize(Row<T>& row, bool& infeasible_marker) {
  using lp::abs_of;
  T s(0);
  for (auto& v : row.a) {
    if (abs_of(v) <= Num<T>::zero_tol()) v = T(0);
    if (abs_of(v) > s) s = abs_of(v);
  }
  infeasible_marker = false;
  if (s == T(0)) {
    if (row.c < -Num<T>::zero_tol()) infeasible_marker = true;
    return false;
  }
  for (auto& v : row.a) v /= s;
  row.c /= s;
  return true;
}

template <class T>
void normalize_all(System<T>& sys) {
  std::vector<Row<T>> kept;
  bool infeasible = false;
  for (auto& row : sys.rows) {
    bool marker = false;
    if (normalize(row, marker)) {
      kept.push_back(std::move(row));
    } else if (marker) {
      infeasible = true;
    }
  }
  if (infeasible) {
    Row<T> bad{std::vector<T>(sys.vars.size(), T(0)), T(-1)};
    kept.push_back(bad);
  }
  sys.rows = std::move(kept);
}

template <class T>
bool same_direction(const Row<T>& p, const Row<T>& q) {
  using lp::abs_of;
  for (std::size_t i = 0; i < p.a.size(); ++i) {
    if (abs_of(p.a[i] - q.a[i]) > Num<T>::zero_tol()) return false;
  }
  return true;
}

// Collapses rows with identical normalized coefficients, keeping the
// tightest right-hand side.
template <class T>
void dedupe(System<T>& sys) {
  std::vector<Row<T>> out;
  for (auto& row : sys.rows) {
    bool merged = false;
    for (auto& o : out) {
      if (same_direction(o, row)) {
        if (row.c < o.c) o.c = row.c;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(std::move(row));
  }
  sys.rows = std::move(out);
}

// Row i is implied by the rows in `others` when some y >= 0 has
// sum_k y_k a_k = a_i and sum_k y_k c_k <= c_i.
template <class T>
bool is_implied(const std::vector<const Row<T>*>& others, const Row<T>& row) {
  const std::size_t n = row.a.size();
  const std::size_t m = others.size();
  if (m == 0) {
    bool zero = std::all_of(row.a.begin(), row.a.end(), [](const T& v) { return v == T(0); });
    return zero && row.c >= T(0);
  }
  std::vector<std::vector<T>> M(n, std::vector<T>(m));
  std::vector<T> cost(m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < n; ++i) M[i][k] = others[k]->a[i];
    cost[k] = others[k]->c;
  }
  auto res = lp::minimize_standard_form(M, row.a, cost, Num<T>::pivot_eps());
  if (res.status == lp::Status::Unbounded) return true;
  if (res.status == lp::Status::Infeasible) return false;
  return res.value <= row.c + Num<T>::implied_tol();
}

template <class T>
void remove_redundant_rows(System<T>& sys) {
  normalize_all(sys);
  dedupe(sys);
  std::vector<bool> alive(sys.rows.size(), true);
  for (std::size_t i = 0; i < sys.rows.size(); ++i) {
    std::vector<const Row<T>*> others;
    others.reserve(sys.rows.size());
    for (std::size_t k = 0; k < sys.rows.size(); ++k) {
      if (k != i && alive[k]) others.push_back(&sys.rows[k]);
    }
    if (is_implied(others, sys.rows[i])) alive[i] = false;
  }
  std::vector<Row<T>> kept;
  for (std::size_t i = 0; i < sys.rows.size(); ++i)
    if (alive[i]) kept.push_back(std::move(sys.rows[i]));
  sys.rows = std::move(kept);
}

template <class T>
System<T> eliminate(const System<T>& sys, std::size_t var) {
  System<T> out;
  for (std::size_t i = 0; i < sys.vars.size(); ++i)
    if (i != var) out.vars.push_back(sys.vars[i]);
  auto drop_var = [var](const std::vector<T>& a) {
    std::vector<T> r;
    r.reserve(a.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (i != var) r.push_back(a[i]);
    return r;
  };
  std::vector<const Row<T>*> pos, neg;
  for (const auto& row : sys.rows) {
    const T& a = row.a[var];
    if (lp::abs_of(a) <= Num<T>::zero_tol()) {
      out.rows.push_back({drop_var(row.a), row.c});
    } else if (a > T(0)) {
      pos.push_back(&row);
    } else {
      neg.push_back(&row);
    }
  }
  for (const auto* p : pos) {
    for (const auto* q : neg) {
      T wp = -q->a[var];
      T wq = p->a[var];
      Row<T> comb;
      comb.a.resize(sys.vars.size());
      for (std::size_t i = 0; i < sys.vars.size(); ++i) comb.a[i] = wp * p->a[i] + wq * q->a[i];
      comb.a[var] = T(0);
      comb.c = wp * p->c + wq * q->c;
      out.rows.push_back({drop_var(comb.a), comb.c});
    }
  }
  normalize_all(out);
  return out;
}

template <class T>
System<T> convert(const HalfPlaneSystem& sys) {
  System<T> out;
  out.vars = sys.vars();
  for (const auto& row : sys.rows()) {
    Row<T> r;
    for (double v : row.coeffs) r.a.push_back(Num<T>::from(v));
    r.c = Num<T>::from(row.rhs);
    out.rows.push_back(std::move(r));
  }
  return out;
}

template <class T>
HalfPlaneSystem convert_back(const System<T>& sys) {
  HalfPlaneSystem out(sys.vars);
  for (const auto& row : sys.rows) {
    std::vector<double> a;
    for (const auto& v : row.a) a.push_back(Num<T>::to_double(v));
    out.add_row(std::move(a), Num<T>::to_double(row.c));
  }
  return out;
}

template <class T>
std::size_t pick_variable(const System<T>& sys, const std::vector<std::string>& candidates) {
  std::size_t best = sys.vars.size();
  long best_score = 0;
  for (const auto& name : candidates) {
    auto it = std::find(sys.vars.begin(), sys.vars.end(), name);
    std::size_t v = static_cast<std::size_t>(it - sys.vars.begin());
    long p = 0, q = 0;
    for (const auto& row : sys.rows) {
      if (row.a[v] > Num<T>::zero_tol()) ++p;
      if (row.a[v] < -Num<T>::zero_tol()) ++q;
    }
    long score = p * q - p - q;
    if (best == sys.vars.size() || score < best_score) {
      best = v;
      best_score = score;
    }
  }
  return best;
}

template <class T>
ProjectionReport run_projection(const HalfPlaneSystem& input, const std::vector<std::string>& keep,
                                const std::vector<std::string>* order) {
  ProjectionReport report;
  report.input = input;
  for (const auto& v : input.vars())
    if (std::find(keep.begin(), keep.end(), v) != keep.end()) report.kept_vars.push_back(v);
  std::vector<std::string> todo;
  if (order) {
    todo = *order;
  } else {
    for (const auto& v : input.vars())
      if (std::find(keep.begin(), keep.end(), v) == keep.end()) todo.push_back(v);
  }
  if (todo.empty()) {
    report.output = input;
    report.rows_after_redundancy_removal = input.num_rows();
    return report;
  }
  System<T> sys = convert<T>(input);
  remove_redundant_rows(sys);
  while (!todo.empty()) {
    std::size_t v;
    if (order) {
      auto it = std::find(sys.vars.begin(), sys.vars.end(), todo.front());
      v = static_cast<std::size_t>(it - sys.vars.begin());
    } else {
      v = pick_variable(sys, todo);
    }
    std::string name = sys.vars[v];
    todo.erase(std::find(todo.begin(), todo.end(), name));
    report.elimination_order.push_back(name);
    sys = eliminate(sys, v);
    report.rows_generated += sys.rows.size();
    remove_redundant_rows(sys);
  }
  report.output = convert_back(sys);
  report.rows_after_redundancy_removal = report.output.num_rows();
  return report;
}

void check_names(const HalfPlaneSystem& sys, const std::vector<std::string>& names) {
  for (const auto& n : names) sys.require_index(n);
}

}  // namespace

HalfPlaneSystem fm_eliminate(const HalfPlaneSystem& sys, const std::string& var) {
  std::size_t v = sys.require_index(var);
  auto s = convert<double>(sys);
  normalize_all(s);
  return convert_back(eliminate(s, v));
}

HalfPlaneSystem remove_redundant(const HalfPlaneSystem& sys, Arithmetic arithmetic) {
  if (arithmetic == Arithmetic::ExactRational) {
    auto s = convert<Rational>(sys);
    remove_redundant_rows(s);
    return convert_back(s);
  }
  auto s = convert<double>(sys);
  remove_redundant_rows(s);
  return convert_back(s);
}

ProjectionReport project(const HalfPlaneSystem& sys, const std::vector<std::string>& keep,
                         Arithmetic arithmetic) {
  check_names(sys, keep);
  if (arithmetic == Arithmetic::ExactRational) return run_projection<Rational>(sys, keep, nullptr);
  return run_projection<double>(sys, keep, nullptr);
}

ProjectionReport project_in_order(const HalfPlaneSystem& sys, const std::vector<std::string>& order,
                                  Arithmetic arithmetic) {
  check_names(sys, order);
  std::vector<std::string> keep;
  for (const auto& v : sys.vars())
    if (std::find(order.begin(), order.end(), v) == order.end()) keep.push_back(v);
  if (arithmetic == Arithmetic::ExactRational) return run_projection<Rational>(sys, keep, &order);
  return run_projection<double>(sys, keep, &order);
}

std::optional<double> maximize_linear(const HalfPlaneSystem& sys, std::span<const double> objective) {
  if (objective.size() != sys.num_vars()) {
    throw Error(ErrorCode::InvalidSystem, "objective length does not match variable count");
  }
  const std::size_t n = sys.num_vars(), m = sys.num_rows();
  std::vector<std::vector<double>> M(n, std::vector<double>(m));
  std::vector<double> cost(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto& row = sys.rows()[k];
    double s = 0.0;
    for (double v : row.coeffs) s = std::max(s, std::abs(v));
    if (s == 0.0) s = 1.0;
    for (std::size_t i = 0; i < n; ++i) M[i][k] = row.coeffs[i] / s;
    cost[k] = row.rhs / s;
  }
  std::vector<double> r(objective.begin(), objective.end());
  auto res = lp::minimize_standard_form(M, r, cost, 1e-11);
  if (res.status != lp::Status::Optimal) return std::nullopt;
  return res.value;
}

bool is_feasible(const HalfPlaneSystem& sys) {
  const std::size_t n = sys.num_vars(), m = sys.num_rows();
  if (m == 0) return true;
  // Farkas: infeasible iff some y >= 0, sum y = 1 has A^T y = 0, b.y < 0.
  std::vector<std::vector<double>> M(n + 1, std::vector<double>(m));
  std::vector<double> cost(m), r(n + 1, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const auto& row = sys.rows()[k];
    double s = 0.0;
    for (double v : row.coeffs) s = std::max(s, std::abs(v));
    if (s == 0.0) s = 1.0;
    for (std::size_t i = 0; i < n; ++i) M[i][k] = row.coeffs[i] / s;
    M[n][k] = 1.0;
    cost[k] = row.rhs / s;
  }
  r[n] = 1.0;
  auto res = lp::minimize_standard_form(M, r, cost, 1e-11);
  return res.status != lp::Status::Optimal || res.value >= -1e-9;
}

std::optional<std::pair<double, double>> feasible_interval(const HalfPlaneSystem& sys,
                                                           std::span<const double> point,
                                                           std::size_t var, double tol) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& row : sys.rows()) {
    double rest = 0.0;
    for (std::size_t i = 0; i < row.coeffs.size(); ++i)
      if (i != var) rest += row.coeffs[i] * point[i];
    double a = row.coeffs[var];
    double slack = row.rhs - rest;
    if (std::abs(a) <= 1e-12) {
      if (slack < -tol) return std::nullopt;
    } else if (a > 0) {
      hi = std::min(hi, slack / a);
    } else {
      lo = std::max(lo, slack / a);
    }
  }
  if (lo > hi + tol) return std::nullopt;
  return std::make_pair(lo, hi);
}

std::string system_to_json(const HalfPlaneSystem& sys) {
  nlohmann::json j;
  j["vars"] = sys.vars();
  j["rows"] = nlohmann::json::array();
  for (const auto& row : sys.rows()) {
    j["rows"].push_back({{"coeffs", row.coeffs}, {"rhs", row.rhs}});
  }
  return j.dump(2);
}

HalfPlaneSystem system_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    HalfPlaneSystem sys(j.at("vars").get<std::vector<std::string>>());
    for (const auto& row : j.at("rows")) {
      sys.add_row(row.at("coeffs").get<std::vector<double>>(), row.at("rhs").get<double>());
    }
    return sys;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string report_to_json(const ProjectionReport& report) {
  nlohmann::json j;
  j["input"] = nlohmann::json::parse(system_to_json(report.input));
  j["kept_vars"] = report.kept_vars;
  j["elimination_order"] = report.elimination_order;
  j["output"] = nlohmann::json::parse(system_to_json(report.output));
  j["rows_generated"] = report.rows_generated;
  j["rows_after_redundancy_removal"] = report.rows_after_redundancy_removal;
  return j.dump(2);
}

}  // namespace cogrates
