#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cogrates/region_geometry.hpp"

namespace cogrates {

// Standard-form cognitive Z channel: Y1 = X1 + Z1, Y2 = K X1 + Z2,
// Y3 = b X1 + X2 + Z3 with unit noises and powers P1, P2.
struct StandardZic {
  double P1 = 0.0;
  double P2 = 0.0;
  double K = 0.0;
  double b = 0.0;
};

struct PhysicalZic {
  double h11 = 1.0, h12 = 1.0, h13 = 1.0, h23 = 1.0;
  double N1 = 1.0, N2 = 1.0, N3 = 1.0;
  double P1p = 0.0, P2p = 0.0;
};

struct SweepGrid {
  std::size_t alpha_steps = 101;
  std::size_t beta_steps = 101;
  std::size_t mu_steps = 201;
  double mu_range = 5.0;  // mu grid spans [-mu_range, mu_range]
  bool include_costa_candidate = true;
  std::size_t r1_samples = kDefaultEnvelopeSamples;
  // Local compass-search refinement of each R1 sample, started from the
  // best grid slice. Without it the result is the plain grid union.
  bool refine = true;
  // Additional R1 breakpoints (e.g. another region's grid) to sample at.
  std::vector<double> extra_r1;
};

struct Zeta {
  double z1 = 0.0;
  double z2 = 0.0;
  double z3 = 0.0;
};

// Per-slice caps of a parameterized region: R1 <= r1, R2 <= r2,
// R1 + R2 <= sum (infinite when absent).
struct SliceCaps {
  double r1 = 0.0;
  double r2 = 0.0;
  double sum = 0.0;
};

inline constexpr double kMaxCognitiveGain = 1e6;

// Half log2(1 + x), in bits.
double gamma(double x);

void validate(const StandardZic& c);
StandardZic standardize(const PhysicalZic& p);

Envelope region_r1(const StandardZic& c, std::size_t samples = kDefaultEnvelopeSamples,
                   const std::vector<double>& extra_r1 = {});
Envelope region_r2(const StandardZic& c);
double zic_sum_capacity(const StandardZic& c);

HalfPlaneSystem region_r1_system(const StandardZic& c);

// Five-row polygon of R3 at fixed (alpha, beta), over R1 and R2.
HalfPlaneSystem r3_slice_system(const StandardZic& c, double alpha, double beta);
SliceCaps r3_slice(const StandardZic& c, double alpha, double beta);
Envelope region_r3(const StandardZic& c, const SweepGrid& g = {});

// Block-Markov rate constraints before elimination, over
// R1, R2, R11, R12, R0 with R1 = R11 + R12.
HalfPlaneSystem zic_rate_system(const StandardZic& c, double alpha, double beta);

Zeta zeta(const StandardZic& c, double alpha, double beta, double mu);
double costa_mu(const StandardZic& c, double alpha, double beta);
std::optional<SliceCaps> r4_slice(const StandardZic& c, double alpha, double beta, double mu);
Envelope region_r4(const StandardZic& c, const SweepGrid& g = {});

SliceCaps r5_slice(const StandardZic& c, double alpha);
Envelope region_r5(const StandardZic& c, const SweepGrid& g = {});

SliceCaps outer_slice(const StandardZic& c, double alpha);
Envelope outer_bound_gaussian(const StandardZic& c, const SweepGrid& g = {});
// The parametric curve (min(C1, gamma(K^2 a P1)), min(C2, G(a))) for a in [0, 1].
std::vector<RatePair> outer_bound_tradeoff(const StandardZic& c, std::size_t steps = 101);

double r1_subset_r3_k_threshold(const StandardZic& c);
RatePair corner_point(const StandardZic& c);
RatePair corollary_point(const StandardZic& c);

}  // namespace cogrates
