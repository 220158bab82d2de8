#pragma once

// Discrete rearrangements (permutations of equal-area interior cell values),
// Hardy-Littlewood couplings and the energy / supporting-functional probes.

#include <cstdint>

#include "arnold/steady.hpp"

namespace arnold {

std::uint64_t splitmix64(std::uint64_t x);

struct RearrangementSample {
  ScalarField w;
  double distance_lp = 0.0;  // ||w - omega_bar||_p
  std::size_t swap_count = 0;
  std::uint64_t seed = 0;
};

// k transpositions of distinct interior cells drawn uniformly.
RearrangementSample random_swaps(const ScalarField& omega_bar, std::size_t k, std::uint64_t seed, double p = 2.0);
// As above, but a swap that would bring the distance to `radius` or beyond is
// skipped; at most 50 k draws are made.
RearrangementSample random_swaps_within(const ScalarField& omega_bar, std::size_t k, double radius,
                                        std::uint64_t seed, double p = 2.0);

// Sorted-descending v0 assigned to positions ranked by descending w (ties by index).
std::vector<double> hl_assign(std::vector<double> v0, const std::vector<double>& w);
ScalarField hl_coupling(const std::vector<double>& v0, const ScalarField& w_tilde);

// L1 distance of h^2-weighted value histograms on shared edges spanning both
// ranges; disjoint supports give 2|D|.
double histogram_distance(const ScalarField& w1, const ScalarField& w2, std::size_t bins = 64);

struct ProbeRow {
  std::uint64_t seed = 0;
  std::size_t swap_count = 0;
  double distance = 0.0;
  double E = 0.0, EC = 0.0, D_hat = 0.0, D = 0.0, mu = 0.0, mu_residual = 0.0;
  double dE = 0.0;  // E(w,a) - E(omega_bar,a)
  bool energy_violation = false;
  bool chain_violation = false;
};

struct ProbeReport {
  std::vector<ProbeRow> rows;
  std::size_t violations = 0;
  double max_excess = 0.0;  // max dE (energy probes) or max chain excess (supporting probe)
  double E_bar = 0.0;
  double radius = 0.0;
  double tol = 0.0;
  double max_distance = 0.0;
};

// Samples of distance < radius; a violation is dE > tol_rel * |E(omega_bar,a)|.
ProbeReport local_max_probe(const HarmonicBasis& b, const SteadyState& state, double radius, std::size_t n_samples,
                            std::uint64_t seed, double tol_rel = 1e-8, double p = 2.0);
// Every transposition of interior cells; requires at most 8 interior cells.
ProbeReport exhaustive_swap_probe(const HarmonicBasis& b, const SteadyState& state, double tol_rel = 1e-8);

// Checks EC <= D_hat <= D_s (for the listed s and s = 0) on random
// rearrangements, with relative tolerance rel_tol. Row 0 is omega_bar itself.
ProbeReport supporting_probe(const HarmonicBasis& b, const SteadyState& state, const LegendrePair& lp,
                             std::size_t n_samples, std::uint64_t seed, double rel_tol = 1e-6,
                             std::size_t max_swaps = 64);

}  // namespace arnold
