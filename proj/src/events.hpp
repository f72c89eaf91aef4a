// Internal: merged snapshot/diagnostics/forced-time event schedule shared by
// the two time integrators.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace pulselab {
namespace detail {

struct Event {
    double t = 0.0;
    bool snap = false, diag = false;
};

inline double event_tol(double t_final) { return 1e-9 * std::max(1.0, t_final); }

inline std::vector<Event> build_events(double t_final, double snap_dt, double diag_dt,
                                       const std::vector<double>& forced) {
    const double tol = event_tol(t_final);
    std::vector<Event> ev;
    auto push = [&](double t, bool snap, bool diag) {
        for (auto& e : ev)
            if (std::fabs(e.t - t) <= tol) {
                e.snap = e.snap || snap;
                e.diag = e.diag || diag;
                return;
            }
        ev.push_back(Event{t, snap, diag});
    };
    for (std::size_t k = 0; k * snap_dt <= t_final + tol; ++k)
        push(std::min(double(k) * snap_dt, t_final), true, false);
    for (std::size_t k = 0; k * diag_dt <= t_final + tol; ++k)
        push(std::min(double(k) * diag_dt, t_final), false, true);
    for (double t : forced) push(t, true, true);
    push(t_final, true, true);
    std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
    return ev;
}

} // namespace detail
} // namespace pulselab
