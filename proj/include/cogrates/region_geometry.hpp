#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cogrates {

struct RatePair {
  double r1 = 0.0;
  double r2 = 0.0;
};

// Rows a.x <= rhs over an ordered list of named variables.
class HalfPlaneSystem {
 public:
  struct Row {
    std::vector<double> coeffs;
    double rhs = 0.0;
  };

  HalfPlaneSystem() = default;
  explicit HalfPlaneSystem(std::vector<std::string> vars);

  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t num_vars() const { return vars_.size(); }
  std::size_t num_rows() const { return rows_.size(); }

  std::optional<std::size_t> index_of(const std::string& name) const;
  std::size_t require_index(const std::string& name) const;

  void add_row(std::vector<double> coeffs, double rhs);
  // Coefficients by variable name; names must already be declared.
  void add_row_named(const std::map<std::string, double>& coeffs, double rhs);
  void add_equality(const std::map<std::string, double>& coeffs, double rhs);

  // Largest row violation a.x - rhs at x (<= 0 when x is feasible).
  double max_violation(std::span<const double> x) const;
  bool contains(std::span<const double> x, double tol) const;

 private:
  std::vector<std::string> vars_;
  std::vector<Row> rows_;
};

// Downward-closed 2-D region: for r1 in [0, r1_max], every r2 up to the
// linear interpolation of the stored samples. Stored envelopes are always
// canonical (nonincreasing r2).
class Envelope {
 public:
  // Builds a canonical envelope from raw samples. The grid must start at 0
  // and be strictly ascending; the values are replaced by their running
  // maximum from the right.
  Envelope(std::vector<double> r1_grid, std::vector<double> r2_values);

  static Envelope origin();
  static Envelope rectangle(double r1_max, double r2_max);

  std::span<const double> r1_grid() const { return r1_; }
  std::span<const double> r2_max() const { return r2_; }
  std::size_t size() const { return r1_.size(); }
  double r1_max() const { return r1_.back(); }

  // Interpolated boundary value; returns -infinity beyond r1_max.
  double value_at(double r1) const;
  bool contains(RatePair p, double tol) const;

 private:
  std::vector<double> r1_;
  std::vector<double> r2_;
};

// a lies in b up to tol: pointwise r2 excess at most tol, or failing that
// every point of a within tol (in both coordinates) of b.
struct SubsetResult {
  bool holds = false;
  double max_violation = 0.0;  // largest pointwise (a - b); negative means strict slack
};

inline constexpr std::size_t kDefaultEnvelopeSamples = 512;

// Uniform grid of `samples` points over [0, r1_max] merged with `extra`
// breakpoints that fall inside the interval.
std::vector<double> make_r1_grid(double r1_max, std::size_t samples,
                                 std::span<const double> extra = {});

// Vertices of the polygon {x >= 0 : rows} for a system over exactly R1, R2,
// in counter-clockwise order. Empty when the polygon is empty.
std::vector<RatePair> polygon_vertices(const HalfPlaneSystem& sys);

Envelope envelope_from_halfplanes(const HalfPlaneSystem& sys,
                                  std::size_t samples = kDefaultEnvelopeSamples,
                                  std::span<const double> extra_r1 = {});

Envelope union_of(const Envelope& a, const Envelope& b);
Envelope intersection_of(const Envelope& a, const Envelope& b);
Envelope convex_hull(const Envelope& a);
SubsetResult subset(const Envelope& a, const Envelope& b, double tol);
double max_deviation(const Envelope& a, const Envelope& b);

// Largest violation of b's rows by a vertex of a's polygon: zero (up to
// rounding) when a lies inside b, infinite when only b is empty.
double polygon_excess(const HalfPlaneSystem& a, const HalfPlaneSystem& b);

// Largest violation of a's polygon vertices against b's rows, in either
// direction; zero (up to rounding) when the polygons coincide.
double polygon_distance(const HalfPlaneSystem& a, const HalfPlaneSystem& b);

void write_envelope_csv(std::ostream& out, const Envelope& e);
std::string envelope_to_csv(const Envelope& e);
Envelope read_envelope_csv(std::istream& in);

}  // namespace cogrates
