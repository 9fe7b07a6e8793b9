#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sirf/equilibria.hpp"
#include "sirf/model.hpp"

namespace sirf {

enum class Integrator { Rk4, Rkf45 };

const char* to_string(Integrator i);

struct IntegrateOptions {
    Integrator method = Integrator::Rk4;
    double step = 1e-3;     // RK4 step size (also the initial RKF45 step)
    double abs_tol = 1e-9;  // RKF45 error control
    double rel_tol = 1e-9;
    double min_step = 1e-12; // below this the adaptive run fails loudly
    int stride = 1;          // record every stride-th accepted step
    double invariance_tol = 1e-9;

    // Optional early exit: stop once the state is within stop_position_tol
    // of one of these points and the vector field at the point itself has
    // norm below stop_field_tol.  Basin mapping passes the stable
    // equilibria here so it does not simulate long after the answer is
    // known.  Distances use the (I, R) components.
    const std::vector<Equilibrium>* stop_at = nullptr;
    double stop_position_tol = 1e-6;
    double stop_field_tol = 1e-8;
};

struct TerminalStatus {
    enum class Code { ReachedEnd, Converged, Failed };
    Code code = Code::ReachedEnd;
    int equilibrium = -1; // index into *stop_at when Converged
    std::string message;
};

/// Recorded orbit.  times are strictly increasing; states match them
/// one-for-one.  The integrator settings used are echoed for provenance.
template <class State>
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    TerminalStatus status;

    Integrator method = Integrator::Rk4;
    double step = 0.0;
    double abs_tol = 0.0;
    double rel_tol = 0.0;
    int stride = 1;
};

/// Integrate the reduced (2-D) or full (3-D) system from init to t_end.
/// Throws SpecError when init violates its domain (negative fractions,
/// I + R > 1, |S+I+R-1| > 1e-9) or t_end <= 0.  States are never clamped:
/// if the trajectory leaves the simplex by more than invariance_tol the
/// run fails with TerminalStatus::Code::Failed and the offending state.
Trajectory<State2> integrate(const Model& m, State2 init, double t_end,
                             const IntegrateOptions& opt = {});
Trajectory<State3> integrate(const Model& m, State3 init, double t_end,
                             const IntegrateOptions& opt = {});

/// Which of `candidates` the trajectory has settled on: the final state
/// must lie within position_tol (Euclidean, (I, R) components) of the
/// equilibrium and the vector field at the equilibrium itself must have
/// norm below field_tol.  Ties go to the nearest candidate.  Returns the
/// index into `candidates`, or nullopt.
std::optional<int> detect_limit(const Trajectory<State2>& traj,
                                const std::vector<Equilibrium>& candidates,
                                const Model& m, double position_tol = 1e-6,
                                double field_tol = 1e-8);

/// Evidence of a closed orbit: the state returns within return_tol of an
/// earlier recorded state after an intervening excursion of at least
/// min_excursion.  Trajectories that converged to an equilibrium are never
/// periodic.  At most max_points samples are examined (strided uniformly)
/// to keep the scan quadratic in a bounded count.
struct PeriodicOrbitFinding {
    double tau_first = 0.0;  // time of the revisited state
    double tau_return = 0.0; // time of the return
    double excursion = 0.0;  // largest distance wandered in between
};

std::optional<PeriodicOrbitFinding>
periodicity_probe(const Trajectory<State2>& traj, double return_tol = 1e-6,
                  double min_excursion = 1e-3, int max_points = 4096);

// ----------------------------------------------------------- basin maps --

struct BasinCell {
    double I0 = 0.0;
    double R0 = 0.0;
    int outcome = -1; // index into the outcome list, -1 = unresolved
};

struct BasinMap {
    int n = 0;         // lattice points per axis
    double t_end = 0.0;
    std::vector<BasinCell> cells; // lattice points with I0 + R0 <= 1,
                                  // I-major then R (row-major, deterministic)
};

struct BasinOptions {
    double step = 1e-3;
    int threads = 0; // 0 = hardware concurrency
    double position_tol = 1e-6;
    double field_tol = 1e-8;
};

/// Integrate from every lattice node (i, j)/(n-1) inside the simplex and
/// record which of `outcomes` the trajectory settles on (-1 when none by
/// t_end).  Early exit targets only the stable members of `outcomes`, so a
/// slow pass near a saddle cannot misregister; the final state is still
/// matched against the full list.  Cells are computed in parallel but the
/// map is deterministic: each cell's result is independent of scheduling.
BasinMap basin_map(const Model& m, const std::vector<Equilibrium>& outcomes,
                   int n, double t_end, const BasinOptions& opt = {});

// ------------------------------------------------------------- CSV output --

/// Header `tau,I,R` (or `tau,S,I,R`), one row per recorded sample, shortest
/// round-trip decimals throughout; byte-stable across runs.
void write_trajectory_csv(std::ostream& os, const Trajectory<State2>& traj);
void write_trajectory_csv(std::ostream& os, const Trajectory<State3>& traj);

/// Header `I0,R0,outcome_id`, one row per lattice cell.
void write_basin_csv(std::ostream& os, const BasinMap& map);

} // namespace sirf
