#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "maserbloch/ensemble.hpp"
#include "maserbloch/timeseries.hpp"

namespace mbloch {

/// Semiclassical system state: cavity amplitude plus per-packet coherences
/// (split into re/im arrays for the kernels) and inversions.
struct SystemState {
    double t = 0.0;
    std::complex<double> a{0.0, 0.0};
    std::vector<double> re_sm;  ///< Re <sigma_-^j>
    std::vector<double> im_sm;  ///< Im <sigma_-^j>
    std::vector<double> sz;     ///< <sigma_z^j>

    std::size_t size() const { return sz.size(); }

    std::complex<double> sigma_minus(std::size_t j) const { return {re_sm[j], im_sm[j]}; }

    /// Largest violation of |sigma_z|^2 + 4|sigma_-|^2 <= 1 over all packets
    /// (0 for a physical state).
    double bloch_violation() const;
};

/// Finite-duration cavity drive pulse, possibly detuned from the frame.
struct DriveSegment {
    double t_start = 0.0;
    double t_end = 0.0;
    double amplitude = 0.0;         ///< field amplitude per second, like eta
    double frequency_offset = 0.0;  ///< rad/s relative to the rotating frame
};

/// Uniform detuning step applied to every spin packet (the detuning loop).
struct HoldSegment {
    double t_start = 0.0;
    double t_end = 0.0;
    double detuning_offset = 0.0;  ///< rad/s added to every Delta_s^j
};

/// Right-hand-side values of the equations of motion at one state.
struct Derivative {
    std::complex<double> da;
    std::vector<std::complex<double>> dsigma_minus;
    std::vector<double> dsigma_z;
};

/// Evaluate the Maxwell-Bloch equations with the hole-filling term:
///   d<a>         = -(kappa + i Delta_c)<a> + g_rho N sum_j rho_j <sigma_-^j> + eta_eff(t)
///   d<sigma_-^j> = -(gamma_perp + i(Delta_j + hold_offset))<sigma_-^j> + g_rho <a><sigma_z^j>
///   d<sigma_z^j> = -2 g_rho (<a>* <sigma_-^j> + c.c.) + J (p - <sigma_z^j>)
/// where eta_eff adds any active drive segment with phase exp(-i offset t).
Derivative rhs(const SystemState& state, const EnsembleGrid& grid, const PhysicalParams& params,
               const DriveSegment* drive = nullptr, const HoldSegment* hold = nullptr,
               std::string_view kernel = "auto");

/// Uniformly inverted initial state: sigma_z = p0, sigma_- = seed (real), a = 0.
SystemState prepare_inversion(std::size_t n_packets, double p0, double seed_coherence);

/// Carve a Lorentzian slice of decreased inversion into the state:
/// sigma_z -= depth / (1 + ((Delta - center)/width)^2), clamped to [-1, 1].
/// Fast alternative to simulating the burn pulse as a DriveSegment.
void apply_instantaneous_hole(SystemState& state, const EnsembleGrid& grid, double center,
                              double width, double depth);

/// Instantaneous weighted instability threshold pbarC = sum_j rho_j N C_j <sigma_z^j>.
double instantaneous_threshold(const SystemState& state, const EnsembleGrid& grid,
                               const PhysicalParams& params);

/// Initial preparation applied at t = 0.
struct Preparation {
    double p0 = 0.3;
    double seed_coherence = 1e-6;
    struct Hole {
        double center = 0.0;
        double width = 0.0;
        double depth = 0.0;
    };
    std::optional<Hole> hole;
};

/// Time-ordered experimental schedule for one integration run.
struct Schedule {
    Preparation initial;
    std::vector<HoldSegment> holds;
    std::vector<DriveSegment> drives;
    double t_end = 0.0;
};

struct RecordSpec {
    double output_rate = 50e6;        ///< samples per second
    std::size_t sigma_z_stride = 0;   ///< keep every k-th sample's inversion profile (0: off)
};

struct IntegrationOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    std::string kernel = "auto";
    std::uint64_t max_steps = 500'000'000;
    double noise_amplitude = 0.0;  ///< optional stochastic drive, field/s per quadrature
    std::uint64_t noise_seed = 1;
};

/// Integrate the schedule from the prepared state. Segment boundaries are hit
/// exactly (the integration restarts at every event time); output is sampled
/// uniformly at record.output_rate from the dense interpolant.
TimeSeries integrate(const Schedule& schedule, const EnsembleGrid& grid,
                     const PhysicalParams& params, const RecordSpec& record,
                     const IntegrationOptions& options = {});

}  // namespace mbloch
