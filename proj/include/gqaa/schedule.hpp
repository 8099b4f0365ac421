#pragma once

// Piecewise-linear anneal schedules s(t). Forward schedules start at s=0,
// reverse schedules start at s=1; both must end at s=1.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace gqaa {

enum class AnnealMode { forward, reverse };

struct AnnealSchedule {
    // (time in microseconds, s) pairs, times strictly increasing.
    std::vector<std::pair<double, double>> vertices;
    AnnealMode mode = AnnealMode::reverse;

    void validate() const {
        if (vertices.size() < 2)
            throw std::invalid_argument("AnnealSchedule: need at least two vertices");
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (i > 0 && vertices[i].first <= vertices[i - 1].first)
                throw std::invalid_argument("AnnealSchedule: times must be strictly increasing");
            const double s = vertices[i].second;
            if (s < 0.0 || s > 1.0)
                throw std::invalid_argument("AnnealSchedule: s must lie in [0,1]");
        }
        if (vertices.back().second != 1.0)
            throw std::invalid_argument("AnnealSchedule: final s must be 1");
        const double s0 = vertices.front().second;
        if (mode == AnnealMode::forward && s0 != 0.0)
            throw std::invalid_argument("AnnealSchedule: forward mode must start at s=0");
        if (mode == AnnealMode::reverse && s0 != 1.0)
            throw std::invalid_argument("AnnealSchedule: reverse mode must start at s=1");
    }

    double t_begin() const { return vertices.front().first; }
    double t_end() const { return vertices.back().first; }

    double s_at(double t) const {
        if (t <= vertices.front().first) return vertices.front().second;
        if (t >= vertices.back().first) return vertices.back().second;
        for (std::size_t i = 1; i < vertices.size(); ++i) {
            if (t <= vertices[i].first) {
                const auto& [t0, s0] = vertices[i - 1];
                const auto& [t1, s1] = vertices[i];
                return s0 + (s1 - s0) * (t - t0) / (t1 - t0);
            }
        }
        return vertices.back().second;
    }

    // Start time of the trailing monotone ascent to s=1, or t_end() if the
    // schedule never rises at the end. For a reverse dip this is the moment
    // the hold at minimum s ends and the readout ramp begins.
    double readout_ramp_begin() const {
        std::size_t i = vertices.size() - 1;
        while (i > 0 && vertices[i].second > vertices[i - 1].second) --i;
        return vertices[i].first;
    }
};

// The default reverse schedule: ramp from s=1 down to s_q, hold, ramp back.
inline AnnealSchedule reverse_dip_schedule(double s_q, double ramp_us = 10.0, double hold_us = 100.0) {
    if (s_q < 0.0 || s_q > 1.0) throw std::invalid_argument("reverse_dip_schedule: s_q must lie in [0,1]");
    AnnealSchedule sched;
    sched.mode = AnnealMode::reverse;
    if (s_q == 1.0) {
        sched.vertices = {{0.0, 1.0}, {2.0 * ramp_us + hold_us, 1.0}};
    } else {
        sched.vertices = {{0.0, 1.0}, {ramp_us, s_q}, {ramp_us + hold_us, s_q}, {2.0 * ramp_us + hold_us, 1.0}};
    }
    sched.validate();
    return sched;
}

inline AnnealSchedule forward_linear_schedule(double total_us) {
    AnnealSchedule sched;
    sched.mode = AnnealMode::forward;
    sched.vertices = {{0.0, 0.0}, {total_us, 1.0}};
    sched.validate();
    return sched;
}

// Reverse schedule that spends essentially all of its time at s_hold; the
// ramps are too short for any dynamics to land on them. Used to probe
// equilibrium behaviour at a fixed anneal parameter.
inline AnnealSchedule reverse_hold_schedule(double s_hold, double hold_us, double ramp_us = 1e-6) {
    if (s_hold == 1.0) {
        AnnealSchedule sched;
        sched.mode = AnnealMode::reverse;
        sched.vertices = {{0.0, 1.0}, {hold_us, 1.0}};
        sched.validate();
        return sched;
    }
    AnnealSchedule sched;
    sched.mode = AnnealMode::reverse;
    sched.vertices = {{0.0, 1.0}, {ramp_us, s_hold}, {ramp_us + hold_us, s_hold}, {2.0 * ramp_us + hold_us, 1.0}};
    sched.validate();
    return sched;
}

}  // namespace gqaa
