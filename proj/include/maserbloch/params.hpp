#pragma once

#include <cstddef>

#include "maserbloch/common.hpp"

namespace mbloch {

/// All rates and frequencies of the coupled cavity-ensemble system.
/// Everything is stored as an angular rate (rad/s); configuration files and
/// the CLI speak ordinary frequencies f = omega/2pi in Hz.
struct PhysicalParams {
    double omega_c = two_pi * 3.1e9;      ///< absolute cavity mode frequency
    double cavity_detuning = 0.0;         ///< Delta_c of the rotating frame (0: frame at omega_c)
    double kappa = two_pi * 418e3;        ///< cavity loss rate (half width)
    double gamma_perp = two_pi * 200e3;   ///< single-spin decoherence rate
    double g_coll = two_pi * 4.6e6;       ///< collective coupling strength
    double g0 = two_pi * 2.0;             ///< single-spin coupling (spin-count derivation)
    double inhom_fwhm = two_pi * 9.2e6;   ///< W, inhomogeneous full width at half maximum
    double q_shape = 1.39;                ///< q-Gaussian shape parameter
    double spin_center = 0.0;             ///< omega0 - omega_c, center of the spin distribution
    double j_fill = two_pi * 16e3;        ///< hole-filling relaxation rate
    double eta = 1160.0;                  ///< constant cavity drive amplitude (field/s)
    std::size_t n_packets = 501;          ///< number of numerical spin packets
    double span_factor = 2.5;             ///< grid half-span in units of inhom_fwhm

    double omega0() const { return omega_c + spin_center; }

    void validate() const {
        if (kappa <= 0.0) throw config_error("params: kappa must be > 0");
        if (gamma_perp <= 0.0) throw config_error("params: gamma_perp must be > 0");
        if (g_coll <= 0.0) throw config_error("params: g_coll must be > 0");
        if (inhom_fwhm <= 0.0) throw config_error("params: inhomogeneous width must be > 0");
        if (!(q_shape > 1.0 && q_shape < 3.0))
            throw config_error("params: q must satisfy 1 < q < 3");
        if (j_fill < 0.0) throw config_error("params: hole-filling rate must be >= 0");
        if (eta < 0.0) throw config_error("params: drive amplitude eta must be >= 0");
        if (n_packets < 1) throw config_error("params: need at least one spin packet");
        if (span_factor <= 0.0) throw config_error("params: span factor must be > 0");
    }
};

}  // namespace mbloch
