#pragma once

#include <cstddef>
#include <vector>

#include "maserbloch/params.hpp"

namespace mbloch {

/// One numerical bin of the discretized spin frequency distribution.
struct SpinPacket {
    double detuning;  ///< Delta_s^j relative to the rotating frame (rad/s)
    double weight;    ///< rho_j, normalized so the weights sum to 1
    double coupling;  ///< g_rho = g_coll / sqrt(N_rho) (rad/s)
};

/// Equally spaced, weight-normalized grid of spin packets.
/// Immutable after construction; all members are plain data.
struct EnsembleGrid {
    std::vector<SpinPacket> packets;
    std::vector<double> detuning;  ///< SoA copy of packets[].detuning for the kernels
    std::vector<double> weight;    ///< SoA copy of packets[].weight
    double span = 0.0;             ///< half width of the detuning grid (rad/s)
    double center = 0.0;           ///< grid center in the rotating frame (rad/s)

    std::size_t size() const { return packets.size(); }
};

/// Peak-normalized q-Gaussian profile with full width at half maximum `fwhm`.
/// Returns (1 - (1-q) (omega-omega0)^2 / delta_q^2)^(1/(1-q)) with delta_q
/// chosen so the half-maximum crossings sit exactly at omega0 +- fwhm/2.
double q_gaussian_density(double omega, double omega0, double fwhm, double q);

/// Discretize the spin distribution into params.n_packets equally spaced
/// packets on [center - span, center + span], weights renormalized to 1.
EnsembleGrid discretize(const PhysicalParams& params, double span);

/// Same, with span = params.span_factor * params.inhom_fwhm.
EnsembleGrid discretize(const PhysicalParams& params);

/// Per-packet cooperativity C_j = (g_rho^2/kappa) * (gamma_perp + Delta^2/gamma_perp)^-1.
/// The ensemble value is C = sum_j rho_j N_rho C_j.
double packet_cooperativity(const SpinPacket& packet, double kappa, double gamma_perp);

/// Weighted contributions rho_j N_rho C_j; the same weights appear in the
/// instability threshold trace pbarC = sum_j rho_j N_rho <sigma_z^j> C_j.
std::vector<double> threshold_weights(const EnsembleGrid& grid, const PhysicalParams& params);

struct EnsembleCooperativity {
    double c;      ///< dimensionless cooperativity
    double gamma;  ///< effective ensemble linewidth, Gamma = g_coll^2 / (kappa C) (rad/s)
};

EnsembleCooperativity ensemble_cooperativity(const EnsembleGrid& grid, const PhysicalParams& params);

struct DipoleEstimate {
    double density;   ///< spin density n (m^-3)
    double distance;  ///< typical nearest-neighbor distance r = n^(-1/3) (m)
    double j_n;       ///< nearest-neighbor dipole coupling rate (rad/s)
};

/// Nearest-neighbor dipole coupling estimate for a given defect concentration
/// in ppm of the diamond carbon density.
DipoleEstimate nearest_neighbor_coupling(double concentration_ppm);

/// Spin count N = g_coll^2 / g0^2.
double derive_spin_count(double g_coll, double g0);

}  // namespace mbloch
