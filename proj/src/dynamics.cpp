#include "maserbloch/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "maserbloch/integrator.hpp"
#include "maserbloch/kernels.hpp"

namespace mbloch {

double SystemState::bloch_violation() const {
    double worst = 0.0;
    for (std::size_t j = 0; j < size(); ++j) {
        const double norm =
            sz[j] * sz[j] + 4.0 * (re_sm[j] * re_sm[j] + im_sm[j] * im_sm[j]);
        worst = std::max(worst, norm - 1.0);
    }
    return worst;
}

namespace {

kernels::RhsArgs make_args(const SystemState& s, const EnsembleGrid& grid,
                           const PhysicalParams& params, double hold_offset) {
    kernels::RhsArgs args;
    args.n = grid.size();
    args.re_sm = s.re_sm.data();
    args.im_sm = s.im_sm.data();
    args.sz = s.sz.data();
    args.detuning = grid.detuning.data();
    args.weight = grid.weight.data();
    args.detuning_offset = hold_offset;
    args.re_a = s.a.real();
    args.im_a = s.a.imag();
    args.g_rho = grid.packets.empty() ? 0.0 : grid.packets[0].coupling;
    args.gamma_perp = params.gamma_perp;
    args.j_fill = params.j_fill;
    return args;
}

std::complex<double> effective_drive(double t, double eta, const DriveSegment* drive) {
    std::complex<double> e{eta, 0.0};
    if (drive && t >= drive->t_start && t < drive->t_end) {
        const double ph = drive->frequency_offset * t;
        e += drive->amplitude * std::complex<double>(std::cos(ph), -std::sin(ph));
    }
    return e;
}

}  // namespace

Derivative rhs(const SystemState& state, const EnsembleGrid& grid, const PhysicalParams& params,
               const DriveSegment* drive, const HoldSegment* hold, std::string_view kernel) {
    const std::size_t n = grid.size();
    if (state.re_sm.size() != n || state.im_sm.size() != n || state.sz.size() != n)
        throw std::invalid_argument("rhs: state arrays do not match the grid size");
    for (std::size_t j = 0; j < n; ++j)
        if (!std::isfinite(state.re_sm[j]) || !std::isfinite(state.im_sm[j]) ||
            !std::isfinite(state.sz[j]))
            throw numeric_error("rhs: non-finite entry in state");
    if (!std::isfinite(state.a.real()) || !std::isfinite(state.a.imag()))
        throw numeric_error("rhs: non-finite cavity amplitude");

    const double hold_offset =
        (hold && state.t >= hold->t_start && state.t < hold->t_end) ? hold->detuning_offset : 0.0;

    std::vector<double> dre(n), dim(n), dsz(n);
    const auto fn = kernels::select(kernel);
    const auto sums = fn(make_args(state, grid, params, hold_offset), dre.data(), dim.data(),
                         dsz.data());

    Derivative d;
    d.dsigma_minus.resize(n);
    d.dsigma_z.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        d.dsigma_minus[j] = {dre[j], dim[j]};
        d.dsigma_z[j] = dsz[j];
    }
    const double g_n = (grid.packets.empty() ? 0.0 : grid.packets[0].coupling) *
                       static_cast<double>(n);
    const std::complex<double> coll{sums.weighted_re_sm, sums.weighted_im_sm};
    d.da = -(params.kappa + std::complex<double>(0.0, 1.0) * params.cavity_detuning) * state.a +
           g_n * coll + effective_drive(state.t, params.eta, drive);
    return d;
}

SystemState prepare_inversion(std::size_t n_packets, double p0, double seed_coherence) {
    if (std::abs(p0) > 1.0)
        throw config_error("prepare_inversion: |p0| must be <= 1");
    if (seed_coherence < 0.0)
        throw config_error("prepare_inversion: seed coherence must be >= 0");
    SystemState s;
    s.re_sm.assign(n_packets, seed_coherence);
    s.im_sm.assign(n_packets, 0.0);
    s.sz.assign(n_packets, p0);
    return s;
}

void apply_instantaneous_hole(SystemState& state, const EnsembleGrid& grid, double center,
                              double width, double depth) {
    if (width <= 0.0) throw config_error("instantaneous hole: width must be > 0");
    if (depth < 0.0 || depth > 2.0)
        throw config_error("instantaneous hole: depth must be within [0, 2]");
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double x = (grid.detuning[j] - center) / width;
        state.sz[j] = std::clamp(state.sz[j] - depth / (1.0 + x * x), -1.0, 1.0);
    }
}

double instantaneous_threshold(const SystemState& state, const EnsembleGrid& grid,
                               const PhysicalParams& params) {
    const auto w = threshold_weights(grid, params);
    double sum = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) sum += w[j] * state.sz[j];
    return sum;
}

namespace {

// Flat layout used by the integrator: [re_a, im_a, re_sm[n], im_sm[n], sz[n]].
void pack(const SystemState& s, std::vector<double>& y) {
    const std::size_t n = s.size();
    y.resize(2 + 3 * n);
    y[0] = s.a.real();
    y[1] = s.a.imag();
    std::copy(s.re_sm.begin(), s.re_sm.end(), y.begin() + 2);
    std::copy(s.im_sm.begin(), s.im_sm.end(), y.begin() + 2 + n);
    std::copy(s.sz.begin(), s.sz.end(), y.begin() + 2 + 2 * n);
}

struct ActiveSegments {
    const HoldSegment* hold = nullptr;
    const DriveSegment* drive = nullptr;
};

ActiveSegments active_at(const Schedule& sched, double t) {
    ActiveSegments act;
    for (const auto& h : sched.holds)
        if (t >= h.t_start && t < h.t_end) act.hold = &h;
    for (const auto& d : sched.drives)
        if (t >= d.t_start && t < d.t_end) act.drive = &d;
    return act;
}

}  // namespace

TimeSeries integrate(const Schedule& schedule, const EnsembleGrid& grid,
                     const PhysicalParams& params, const RecordSpec& record,
                     const IntegrationOptions& options) {
    params.validate();
    if (record.output_rate <= 0.0) throw config_error("integrate: output rate must be > 0");
    if (schedule.t_end < 0.0) throw config_error("integrate: t_end must be >= 0");
    const std::size_t n = grid.size();
    const auto kernel_fn = kernels::select(options.kernel);

    SystemState init = prepare_inversion(n, schedule.initial.p0, schedule.initial.seed_coherence);
    if (schedule.initial.hole)
        apply_instantaneous_hole(init, grid, schedule.initial.hole->center,
                                 schedule.initial.hole->width, schedule.initial.hole->depth);

    // Global uniform sample grid.
    const double dt_out = 1.0 / record.output_rate;
    const std::size_t n_samples =
        static_cast<std::size_t>(std::floor(schedule.t_end * record.output_rate * (1.0 + 1e-12))) + 1;
    std::vector<double> sample_times(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) sample_times[k] = static_cast<double>(k) * dt_out;

    // Event boundaries: segment starts/ends inside (0, t_end).
    std::set<double> ev{0.0, schedule.t_end};
    auto add_event = [&](double t) {
        if (t > 0.0 && t < schedule.t_end) ev.insert(t);
    };
    for (const auto& h : schedule.holds) {
        add_event(h.t_start);
        add_event(h.t_end);
    }
    for (const auto& d : schedule.drives) {
        add_event(d.t_start);
        add_event(d.t_end);
    }
    if (options.noise_amplitude > 0.0)
        for (double ts : sample_times) add_event(ts);
    std::vector<double> events(ev.begin(), ev.end());

    // Deterministic per-sample-interval noise draws, indexed by interval.
    std::vector<std::complex<double>> noise;
    if (options.noise_amplitude > 0.0) {
        std::mt19937_64 rng(options.noise_seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        noise.resize(n_samples + 1);
        for (auto& z : noise) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            z = options.noise_amplitude * std::complex<double>(re, im);
        }
    }

    const auto thr_w = threshold_weights(grid, params);
    const double g_rho = grid.packets.empty() ? 0.0 : grid.packets[0].coupling;
    const double g_n = g_rho * static_cast<double>(n);

    TimeSeries out;
    out.packet_detuning = grid.detuning;
    out.meta.rtol = options.rtol;
    out.meta.atol = options.atol;
    out.meta.kernel = kernels::resolved_name(options.kernel);
    out.meta.output_rate = record.output_rate;
    out.meta.event_times = events;
    for (const auto& h : schedule.holds)
        out.meta.release_time = std::max(out.meta.release_time, h.t_end);
    out.t.reserve(n_samples);
    out.a.reserve(n_samples);
    out.p.reserve(n_samples);
    out.pbar_c.reserve(n_samples);

    auto emit_sample = [&](double ts, const double* y) {
        out.t.push_back(ts);
        out.a.emplace_back(y[0], y[1]);
        double p = 0.0, pc = 0.0;
        const double* sz = y + 2 + 2 * n;
        for (std::size_t j = 0; j < n; ++j) {
            p += grid.weight[j] * sz[j];
            pc += thr_w[j] * sz[j];
        }
        out.p.push_back(p);
        out.pbar_c.push_back(pc);
        if (record.sigma_z_stride > 0 && (out.t.size() - 1) % record.sigma_z_stride == 0) {
            out.snapshot_t.push_back(ts);
            out.sigma_z.emplace_back(sz, sz + n);
        }
    };

    std::vector<double> y;
    pack(init, y);
    emit_sample(0.0, y.data());
    if (schedule.t_end <= 0.0) return out;

    IntegratorOptions iopts;
    iopts.rtol = options.rtol;
    iopts.atol = options.atol;
    iopts.max_steps = options.max_steps;

    std::size_t si = 1;  // sample 0 already emitted
    for (std::size_t seg = 0; seg + 1 < events.size(); ++seg) {
        const double t0 = events[seg];
        const double t1 = events[seg + 1];
        const auto act = active_at(schedule, 0.5 * (t0 + t1));
        const double hold_off = act.hold ? act.hold->detuning_offset : 0.0;
        const std::complex<double> seg_noise =
            noise.empty() ? std::complex<double>{0.0, 0.0}
                          : noise[std::min<std::size_t>(
                                static_cast<std::size_t>(std::floor(t0 * record.output_rate +
                                                                    0.5)),
                                noise.size() - 1)];

        auto rhs_fn = [&](double t, const double* yv, double* dydt) {
            kernels::RhsArgs args;
            args.n = n;
            args.re_sm = yv + 2;
            args.im_sm = yv + 2 + n;
            args.sz = yv + 2 + 2 * n;
            args.detuning = grid.detuning.data();
            args.weight = grid.weight.data();
            args.detuning_offset = hold_off;
            args.re_a = yv[0];
            args.im_a = yv[1];
            args.g_rho = g_rho;
            args.gamma_perp = params.gamma_perp;
            args.j_fill = params.j_fill;
            const auto sums = kernel_fn(args, dydt + 2, dydt + 2 + n, dydt + 2 + 2 * n);

            // Segment activity is fixed per integration interval so the vector
            // field stays smooth between event boundaries.
            std::complex<double> eta_eff{params.eta, 0.0};
            if (act.drive) {
                const double ph = act.drive->frequency_offset * t;
                eta_eff += act.drive->amplitude *
                           std::complex<double>(std::cos(ph), -std::sin(ph));
            }
            eta_eff += seg_noise;
            dydt[0] = -params.kappa * yv[0] + params.cavity_detuning * yv[1] +
                      g_n * sums.weighted_re_sm + eta_eff.real();
            dydt[1] = -params.kappa * yv[1] - params.cavity_detuning * yv[0] +
                      g_n * sums.weighted_im_sm + eta_eff.imag();
        };

        // Samples strictly inside (t0, t1] belong to this interval's dense output.
        const std::size_t s_begin = si;
        while (si < n_samples && sample_times[si] <= t1) ++si;
        std::span<const double> slice(sample_times.data() + s_begin, si - s_begin);
        integrate_dopri5(rhs_fn, y, t0, t1, slice, iopts, emit_sample);
    }

    // An ulp mismatch between k*dt and t_end can leave the final grid point
    // unemitted; flush it from the end state.
    while (out.t.size() < n_samples) emit_sample(sample_times[out.t.size()], y.data());
    return out;
}

}  // namespace mbloch
