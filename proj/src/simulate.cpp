#include "sirf/simulate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "sirf/errors.hpp"
#include "sirf/format.hpp"

namespace sirf {

const char* to_string(Integrator i) {
    switch (i) {
        case Integrator::Rk4: return "rk4";
        case Integrator::Rkf45: return "rkf45";
    }
    return "?";
}

namespace {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
Vec<N> axpy(const Vec<N>& y, double a, const Vec<N>& x) {
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + a * x[i];
    return out;
}

Vec<2> rhs(const Model& m, const Vec<2>& y) {
    Rates2 r = vector_field(State2{y[0], y[1]}, m);
    return {r.dI, r.dR};
}

Vec<3> rhs(const Model& m, const Vec<3>& y) {
    Rates3 r = vector_field(State3{y[0], y[1], y[2]}, m);
    return {r.dS, r.dI, r.dR};
}

template <std::size_t N>
Vec<N> rk4_step(const Model& m, const Vec<N>& y, double h) {
    Vec<N> k1 = rhs(m, y);
    Vec<N> k2 = rhs(m, axpy(y, 0.5 * h, k1));
    Vec<N> k3 = rhs(m, axpy(y, 0.5 * h, k2));
    Vec<N> k4 = rhs(m, axpy(y, h, k3));
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

// Fehlberg 4(5) tableau.
constexpr double kA21 = 1.0 / 4.0;
constexpr double kA31 = 3.0 / 32.0, kA32 = 9.0 / 32.0;
constexpr double kA41 = 1932.0 / 2197.0, kA42 = -7200.0 / 2197.0,
                 kA43 = 7296.0 / 2197.0;
constexpr double kA51 = 439.0 / 216.0, kA52 = -8.0, kA53 = 3680.0 / 513.0,
                 kA54 = -845.0 / 4104.0;
constexpr double kA61 = -8.0 / 27.0, kA62 = 2.0, kA63 = -3544.0 / 2565.0,
                 kA64 = 1859.0 / 4104.0, kA65 = -11.0 / 40.0;
constexpr double kB5[6] = {16.0 / 135.0, 0.0, 6656.0 / 12825.0,
                           28561.0 / 56430.0, -9.0 / 50.0, 2.0 / 55.0};
constexpr double kB4[6] = {25.0 / 216.0, 0.0, 1408.0 / 2565.0,
                           2197.0 / 4104.0, -1.0 / 5.0, 0.0};

/// One tentative RKF45 step: fifth-order advance plus the scaled error
/// estimate against the embedded fourth-order result.
template <std::size_t N>
void rkf45_step(const Model& m, const Vec<N>& y, double h, Vec<N>& y5,
                double& err_norm, double abs_tol, double rel_tol) {
    Vec<N> k1 = rhs(m, y);
    Vec<N> k2 = rhs(m, axpy(y, h * kA21, k1));
    Vec<N> t3 = y;
    for (std::size_t i = 0; i < N; ++i) t3[i] += h * (kA31 * k1[i] + kA32 * k2[i]);
    Vec<N> k3 = rhs(m, t3);
    Vec<N> t4 = y;
    for (std::size_t i = 0; i < N; ++i)
        t4[i] += h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
    Vec<N> k4 = rhs(m, t4);
    Vec<N> t5 = y;
    for (std::size_t i = 0; i < N; ++i)
        t5[i] += h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
    Vec<N> k5 = rhs(m, t5);
    Vec<N> t6 = y;
    for (std::size_t i = 0; i < N; ++i)
        t6[i] += h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] +
                      kA64 * k4[i] + kA65 * k5[i]);
    Vec<N> k6 = rhs(m, t6);

    const Vec<N>* ks[6] = {&k1, &k2, &k3, &k4, &k5, &k6};
    err_norm = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        double hi5 = 0.0, hi4 = 0.0;
        for (int s = 0; s < 6; ++s) {
            hi5 += kB5[s] * (*ks[s])[i];
            hi4 += kB4[s] * (*ks[s])[i];
        }
        y5[i] = y[i] + h * hi5;
        double scale = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
        double e = h * (hi5 - hi4) / scale;
        err_norm += e * e;
    }
    err_norm = std::sqrt(err_norm / N);
}

template <std::size_t N>
bool inside_simplex(const Vec<N>& y, double tol) {
    if constexpr (N == 2) {
        return y[0] >= -tol && y[1] >= -tol && y[0] + y[1] <= 1.0 + tol;
    } else {
        return y[0] >= -tol && y[1] >= -tol && y[2] >= -tol &&
               std::abs(y[0] + y[1] + y[2] - 1.0) <= tol;
    }
}

template <std::size_t N>
std::string describe_state(double t, const Vec<N>& y) {
    std::string s = "tau = " + format_double(t) + ", state = (";
    for (std::size_t i = 0; i < N; ++i) {
        if (i) s += ", ";
        s += format_double(y[i]);
    }
    s += ")";
    return s;
}

// (I, R) components regardless of dimension.
template <std::size_t N>
std::pair<double, double> ir_of(const Vec<N>& y) {
    if constexpr (N == 2) return {y[0], y[1]};
    else return {y[1], y[2]};
}

/// Index of the stop-candidate the state currently sits on, or -1.
template <std::size_t N>
int stop_match(const Vec<N>& y, const std::vector<Equilibrium>& eqs,
               const std::vector<bool>& eligible, double position_tol) {
    auto [I, R] = ir_of(y);
    int best = -1;
    double best_d2 = position_tol * position_tol;
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        if (!eligible[i]) continue;
        double dI = I - eqs[i].I;
        double dR = R - eqs[i].R;
        double d2 = dI * dI + dR * dR;
        if (d2 <= best_d2) {
            best_d2 = d2;
            best = static_cast<int>(i);
        }
    }
    return best;
}

double field_norm_at(const Model& m, const Equilibrium& e) {
    Rates2 r = vector_field(State2{e.I, e.R}, m);
    return std::hypot(r.dI, r.dR);
}

template <std::size_t N, class State>
Trajectory<State> run_integration(const Model& m, Vec<N> y, double t_end,
                                  const IntegrateOptions& opt,
                                  State (*to_state)(const Vec<N>&)) {
    if (!(t_end > 0.0)) {
        throw SpecError("integrate: t_end must be positive, got " +
                        format_double(t_end));
    }
    if (opt.stride < 1) throw SpecError("integrate: stride must be >= 1");
    if (!(opt.step > 0.0)) throw SpecError("integrate: step must be positive");

    Trajectory<State> traj;
    traj.method = opt.method;
    traj.step = opt.step;
    traj.abs_tol = opt.abs_tol;
    traj.rel_tol = opt.rel_tol;
    traj.stride = opt.stride;

    // Early-exit bookkeeping: only candidates whose own field norm is small
    // enough can ever register as a limit.
    std::vector<bool> eligible;
    if (opt.stop_at) {
        eligible.resize(opt.stop_at->size());
        for (std::size_t i = 0; i < opt.stop_at->size(); ++i) {
            eligible[i] = field_norm_at(m, (*opt.stop_at)[i]) < opt.stop_field_tol;
        }
    }

    double t = 0.0;
    traj.times.push_back(0.0);
    traj.states.push_back(to_state(y));

    auto record = [&](double tt, const Vec<N>& yy) {
        if (!traj.times.empty() && traj.times.back() == tt) return;
        traj.times.push_back(tt);
        traj.states.push_back(to_state(yy));
    };

    auto finish_failed = [&](double tt, const Vec<N>& yy, const std::string& why) {
        record(tt, yy);
        traj.status.code = TerminalStatus::Code::Failed;
        traj.status.message = why;
    };

    if (opt.stop_at) {
        int hit = stop_match(y, *opt.stop_at, eligible, opt.stop_position_tol);
        if (hit >= 0) {
            traj.status.code = TerminalStatus::Code::Converged;
            traj.status.equilibrium = hit;
            traj.status.message = "started at equilibrium";
            return traj;
        }
    }

    // The convergence test is cheap but not free; near an equilibrium the
    // state crawls, so probing every few dozen steps loses nothing.
    constexpr long kStopCheckInterval = 32;

    if (opt.method == Integrator::Rk4) {
        const double h = opt.step;
        long total = static_cast<long>(std::ceil(t_end / h - 1e-9));
        for (long s = 1; s <= total; ++s) {
            double t_next = std::min(static_cast<double>(s) * h, t_end);
            y = rk4_step(m, y, t_next - t);
            t = t_next;
            if (!inside_simplex(y, opt.invariance_tol)) {
                finish_failed(t, y, "positive invariance violated: " +
                                        describe_state(t, y));
                return traj;
            }
            bool last = (s == total);
            if (s % opt.stride == 0 || last) record(t, y);
            if (opt.stop_at && (s % kStopCheckInterval == 0 || last)) {
                int hit = stop_match(y, *opt.stop_at, eligible, opt.stop_position_tol);
                if (hit >= 0) {
                    record(t, y);
                    traj.status.code = TerminalStatus::Code::Converged;
                    traj.status.equilibrium = hit;
                    traj.status.message = "converged at tau = " + format_double(t);
                    return traj;
                }
            }
        }
        traj.status.code = TerminalStatus::Code::ReachedEnd;
        return traj;
    }

    // RKF45 with standard step control.
    double h = std::min(opt.step, t_end);
    long accepted = 0;
    while (t < t_end) {
        if (h < opt.min_step) {
            finish_failed(t, y, "adaptive step size underflow (h = " +
                                    format_double(h) + ") at " +
                                    describe_state(t, y));
            return traj;
        }
        if (t + h > t_end) h = t_end - t;
        Vec<N> y5;
        double err = 0.0;
        rkf45_step(m, y, h, y5, err, opt.abs_tol, opt.rel_tol);
        if (err <= 1.0) {
            t += h;
            y = y5;
            ++accepted;
            if (!inside_simplex(y, opt.invariance_tol)) {
                finish_failed(t, y, "positive invariance violated: " +
                                        describe_state(t, y));
                return traj;
            }
            bool last = (t >= t_end);
            if (accepted % opt.stride == 0 || last) record(t, y);
            if (opt.stop_at && (accepted % kStopCheckInterval == 0 || last)) {
                int hit = stop_match(y, *opt.stop_at, eligible, opt.stop_position_tol);
                if (hit >= 0) {
                    record(t, y);
                    traj.status.code = TerminalStatus::Code::Converged;
                    traj.status.equilibrium = hit;
                    traj.status.message = "converged at tau = " + format_double(t);
                    return traj;
                }
            }
        }
        double factor = (err == 0.0) ? 5.0
                                     : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h *= factor;
    }
    traj.status.code = TerminalStatus::Code::ReachedEnd;
    return traj;
}

State2 vec_to_state2(const Vec<2>& y) { return State2{y[0], y[1]}; }
State3 vec_to_state3(const Vec<3>& y) { return State3{y[0], y[1], y[2]}; }

} // namespace

Trajectory<State2> integrate(const Model& m, State2 init, double t_end,
                             const IntegrateOptions& opt) {
    if (init.I < 0.0 || init.R < 0.0 || init.I + init.R > 1.0) {
        throw SpecError("initial state outside the simplex: I = " +
                        format_double(init.I) + ", R = " + format_double(init.R));
    }
    return run_integration<2, State2>(m, {init.I, init.R}, t_end, opt,
                                      &vec_to_state2);
}

Trajectory<State3> integrate(const Model& m, State3 init, double t_end,
                             const IntegrateOptions& opt) {
    if (init.S < 0.0 || init.I < 0.0 || init.R < 0.0 ||
        std::abs(init.S + init.I + init.R - 1.0) > 1e-9) {
        throw SpecError("initial state outside the simplex: S = " +
                        format_double(init.S) + ", I = " + format_double(init.I) +
                        ", R = " + format_double(init.R));
    }
    return run_integration<3, State3>(m, {init.S, init.I, init.R}, t_end, opt,
                                      &vec_to_state3);
}

std::optional<int> detect_limit(const Trajectory<State2>& traj,
                                const std::vector<Equilibrium>& candidates,
                                const Model& m, double position_tol,
                                double field_tol) {
    if (traj.states.empty()) return std::nullopt;
    const State2& last = traj.states.back();
    int best = -1;
    double best_d = position_tol;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        double d = std::hypot(last.I - candidates[i].I, last.R - candidates[i].R);
        if (d <= best_d && field_norm_at(m, candidates[i]) < field_tol) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    if (best < 0) return std::nullopt;
    return best;
}

std::optional<PeriodicOrbitFinding>
periodicity_probe(const Trajectory<State2>& traj, double return_tol,
                  double min_excursion, int max_points) {
    if (traj.status.code == TerminalStatus::Code::Converged) return std::nullopt;
    std::size_t n = traj.states.size();
    if (n < 3) return std::nullopt;

    std::size_t stride = 1;
    if (max_points > 2 && n > static_cast<std::size_t>(max_points)) {
        stride = (n + max_points - 1) / max_points;
    }
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; i += stride) idx.push_back(i);
    if (idx.back() != n - 1) idx.push_back(n - 1);

    for (std::size_t a = 0; a + 2 < idx.size(); ++a) {
        const State2& base = traj.states[idx[a]];
        double excursion = 0.0;
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            const State2& cur = traj.states[idx[b]];
            double d = std::hypot(cur.I - base.I, cur.R - base.R);
            if (d < return_tol && excursion > min_excursion) {
                return PeriodicOrbitFinding{traj.times[idx[a]],
                                            traj.times[idx[b]], excursion};
            }
            excursion = std::max(excursion, d);
        }
    }
    return std::nullopt;
}

BasinMap basin_map(const Model& m, const std::vector<Equilibrium>& outcomes,
                   int n, double t_end, const BasinOptions& opt) {
    if (n < 2) throw SpecError("basin_map: grid must be at least 2x2");
    if (!(t_end > 0.0)) throw SpecError("basin_map: t_end must be positive");

    BasinMap map;
    map.n = n;
    map.t_end = t_end;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double I0 = static_cast<double>(i) / (n - 1);
            double R0 = static_cast<double>(j) / (n - 1);
            double sum = I0 + R0;
            if (sum > 1.0 + 1e-12) continue;
            // diagonal nodes can round a hair past the edge; put them on it
            if (sum > 1.0) I0 = 1.0 - R0;
            map.cells.push_back({I0, R0, -1});
        }
    }

    // Early-stop targets: the stable outcomes only, so grazing a saddle's
    // neighbourhood never ends a run prematurely.
    std::vector<Equilibrium> stable;
    std::vector<int> stable_to_outcome;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].classification == Stability::Stable) {
            stable.push_back(outcomes[i]);
            stable_to_outcome.push_back(static_cast<int>(i));
        }
    }

    IntegrateOptions iopt;
    iopt.method = Integrator::Rk4;
    iopt.step = opt.step;
    iopt.stride = 1 << 30; // record endpoints only
    iopt.stop_at = &stable;
    iopt.stop_position_tol = opt.position_tol;
    iopt.stop_field_tol = opt.field_tol;

    unsigned hw = std::thread::hardware_concurrency();
    int n_threads = opt.threads > 0 ? opt.threads
                                    : static_cast<int>(hw > 0 ? hw : 1);
    n_threads = std::min<int>(n_threads, static_cast<int>(map.cells.size()));
    n_threads = std::max(n_threads, 1);

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&]() {
        for (;;) {
            std::size_t idx = next.fetch_add(1);
            if (idx >= map.cells.size()) return;
            BasinCell& cell = map.cells[idx];
            try {
                Trajectory<State2> traj =
                    integrate(m, State2{cell.I0, cell.R0}, t_end, iopt);
                if (traj.status.code == TerminalStatus::Code::Converged) {
                    cell.outcome = stable_to_outcome[static_cast<std::size_t>(
                        traj.status.equilibrium)];
                } else if (traj.status.code == TerminalStatus::Code::ReachedEnd) {
                    auto hit = detect_limit(traj, outcomes, m, opt.position_tol,
                                            opt.field_tol);
                    cell.outcome = hit ? *hit : -1;
                } else {
                    cell.outcome = -1; // integration failure: honest unresolved
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);

    return map;
}

void write_trajectory_csv(std::ostream& os, const Trajectory<State2>& traj) {
    os << "tau,I,R\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        os << format_double(traj.times[i]) << ',' << format_double(traj.states[i].I)
           << ',' << format_double(traj.states[i].R) << '\n';
    }
}

void write_trajectory_csv(std::ostream& os, const Trajectory<State3>& traj) {
    os << "tau,S,I,R\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        os << format_double(traj.times[i]) << ',' << format_double(traj.states[i].S)
           << ',' << format_double(traj.states[i].I) << ','
           << format_double(traj.states[i].R) << '\n';
    }
}

void write_basin_csv(std::ostream& os, const BasinMap& map) {
    os << "I0,R0,outcome_id\n";
    for (const BasinCell& c : map.cells) {
        os << format_double(c.I0) << ',' << format_double(c.R0) << ','
           << c.outcome << '\n';
    }
}

} // namespace sirf
