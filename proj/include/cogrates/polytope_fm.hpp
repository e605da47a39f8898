#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cogrates/region_geometry.hpp"

namespace cogrates {

enum class Arithmetic { Floating, ExactRational };

struct ProjectionReport {
  HalfPlaneSystem input;
  std::vector<std::string> kept_vars;
  HalfPlaneSystem output;
  std::vector<std::string> elimination_order;
  std::size_t rows_generated = 0;
  std::size_t rows_after_redundancy_removal = 0;
};

// One Fourier-Motzkin step: pairs every upper bound on `var` with every
// lower bound. The result no longer lists `var` among its variables.
HalfPlaneSystem fm_eliminate(const HalfPlaneSystem& sys, const std::string& var);

// Drops rows implied by the remaining ones. A row a.x <= c is removed when
// a nonnegative combination y of the other rows has A'^T y = a and
// b'.y <= c, found by a small linear program.
HalfPlaneSystem remove_redundant(const HalfPlaneSystem& sys,
                                 Arithmetic arithmetic = Arithmetic::Floating);

// Eliminates every variable outside `keep`, choosing at each step the
// variable that creates the fewest new rows.
ProjectionReport project(const HalfPlaneSystem& sys, const std::vector<std::string>& keep,
                         Arithmetic arithmetic = Arithmetic::Floating);

// Same projection with an explicit elimination order.
ProjectionReport project_in_order(const HalfPlaneSystem& sys, const std::vector<std::string>& order,
                                  Arithmetic arithmetic = Arithmetic::Floating);

// max objective.x over the system, or nullopt when the system is
// infeasible or the objective is unbounded.
std::optional<double> maximize_linear(const HalfPlaneSystem& sys, std::span<const double> objective);

bool is_feasible(const HalfPlaneSystem& sys);

// Interval [lo, hi] of values of `var` that extend the partial point
// (given for all other variables, `var` entry ignored) to a feasible point.
// nullopt when no value works.
std::optional<std::pair<double, double>> feasible_interval(const HalfPlaneSystem& sys,
                                                           std::span<const double> point,
                                                           std::size_t var, double tol = 1e-9);

std::string system_to_json(const HalfPlaneSystem& sys);
HalfPlaneSystem system_from_json(const std::string& text);
std::string report_to_json(const ProjectionReport& report);

}  // namespace cogrates
