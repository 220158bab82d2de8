#pragma once

// Vorticity transport with the circulation-corrected stream closure, the
// conservation monitors and the perturbation experiment.

#include <functional>
#include <optional>
#include <string>

#include "arnold/rearrange.hpp"

namespace arnold {

enum class Scheme { semi_lagrangian, upwind2 };
Scheme parse_scheme(const std::string& s);
std::string scheme_name(Scheme s);

struct SimConfig {
  double cfl = 0.5;
  double dt = 0.0;          // 0 = from the CFL target
  double turnovers = 10.0;  // horizon in turnover times unless t_final > 0
  double t_final = 0.0;
  Scheme scheme = Scheme::semi_lagrangian;
  int cadence = 10;         // steps between diagnostics rows
  double p = 2.0;
  std::size_t hist_bins = 64;
  void validate() const;
};

struct SimState {
  double t = 0.0;
  long step = 0;
  ScalarField omega;  // interior values carry the state
  ScalarField psi;
  VelocityField v;
};

struct DiagnosticsRow {
  double t = 0.0;
  long step = 0;
  double energy = 0.0;         // 1/2 a(psi, psi)
  double kinetic = 0.0;        // from the reconstructed velocity
  std::vector<double> circulations;
  double deviation = 0.0;      // ||omega - omega_ref||_p
  double hist_distance = 0.0;  // against omega(0)
  double omega_min = 0.0, omega_max = 0.0;
  double ec = 0.0;             // E - Casimir when a Legendre pair is supplied
};

struct DiagnosticsSeries {
  std::vector<DiagnosticsRow> rows;
  SimState final_state;
  double turnover = 0.0;
  double dt = 0.0;
  double t_final = 0.0;
  double area = 0.0;
  // Relative drifts over the run.
  double energy_drift() const;
  double circulation_drift() const;  // max_k max_t |c_k(t) - c_k(0)| / max(|c_k(0)|, tiny)
  double hist_drift() const;         // max_t hist_distance / |D|
  double sup_deviation() const;
  double min_omega() const;
  double max_omega() const;
};

class Simulator {
 public:
  Simulator(BasisPtr basis, ScalarField omega0, CirculationVector b, SimConfig cfg);
  const SimState& state() const { return s_; }
  const CirculationVector& b() const { return b_; }
  double max_speed() const;
  // Advances by dt (one step).
  void step(double dt);
  DiagnosticsRow diagnostics(const ScalarField& omega_ref, const ScalarField& omega0,
                             const LegendrePair* lp = nullptr) const;

 private:
  void refresh();
  void step_semi_lagrangian(double dt);
  void step_upwind(double dt);
  ScalarField upwind_rate(const ScalarField& w) const;

  BasisPtr basis_;
  CirculationVector b_;
  SimConfig cfg_;
  SimState s_;
  GhostFill ghost_;
  std::optional<VelocityField> v_prev_;
  double lo_ = 0.0, hi_ = 0.0;
};

// |D| / integral |v|.
double turnover_time(const VelocityField& v);

// Called with the state behind each diagnostics row.
using RowObserver = std::function<void(const SimState&, const DiagnosticsRow&)>;

// omega_ref defaults to omega0.
DiagnosticsSeries run(BasisPtr basis, const ScalarField& omega0, const CirculationVector& b, const SimConfig& cfg,
                      const ScalarField& omega_ref = {}, const LegendrePair* lp = nullptr,
                      const RowObserver& observer = {});

enum class PerturbMode { none, swap, bump };
PerturbMode parse_perturb_mode(const std::string& s);
std::string perturb_mode_name(PerturbMode m);

struct PerturbSpec {
  PerturbMode mode = PerturbMode::none;
  double amplitude = 0.0;  // target ||omega0 - omega_bar||_2
  std::uint64_t seed = 1;
  // Bump centre and radius; a NaN centre selects the mid-radius point on the
  // positive x axis (annulus) or the interior centroid.
  double cx = std::numeric_limits<double>::quiet_NaN();
  double cy = std::numeric_limits<double>::quiet_NaN();
  double radius = 0.0;  // 0 = a quarter of the annulus gap, or 4h
  std::optional<CirculationVector> b;
};

struct Perturbation {
  ScalarField omega0;
  CirculationVector b;
  double distance = 0.0;  // ||omega0 - omega_bar||_2
  std::size_t swap_count = 0;
};

// Swap mode exchanges neighbouring interior values until the L2 distance
// reaches the amplitude. Bump mode adds amplitude times an L2-normalised
// smooth bump.
Perturbation perturb(const SteadyState& state, const PerturbSpec& spec);

struct ExperimentRow {
  std::string label;
  PerturbMode mode = PerturbMode::none;
  double amplitude = 0.0;
  double b_shift = 0.0;  // max |b - a|
  double initial_deviation = 0.0;
  double sup_deviation = 0.0;
  double ratio = 0.0;  // sup / initial, or sup / ||omega_bar|| for the zero row
  double energy_drift = 0.0;
  double circulation_drift = 0.0;
  double hist_drift = 0.0;
  long steps = 0;
};

struct ExperimentCase {
  PerturbMode mode = PerturbMode::none;
  double amplitude = 0.0;
  double b_shift = 0.0;  // added to every component of a
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  double omega_bar_norm = 0.0;
};

ExperimentReport stability_experiment(BasisPtr basis, const SteadyState& state,
                                      const std::vector<ExperimentCase>& cases, const SimConfig& cfg,
                                      std::uint64_t seed);

}  // namespace arnold
