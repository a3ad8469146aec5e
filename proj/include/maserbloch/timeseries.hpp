#pragma once

#include <complex>
#include <string>
#include <vector>

namespace mbloch {

/// Provenance carried alongside a simulated trace.
struct SeriesMeta {
    std::string scenario_name;
    double rtol = 0.0;
    double atol = 0.0;
    std::string kernel;
    double output_rate = 0.0;     ///< samples per second
    double demod_shift_hz = 0.0;  ///< accumulated demodulation shift
    double release_time = 0.0;    ///< end of the last hold segment (0 when none)
    std::vector<double> event_times;
};

/// Uniformly sampled complex cavity amplitude with derived traces and
/// optional per-packet inversion snapshots.
struct TimeSeries {
    std::vector<double> t;                     ///< sample times (s), uniform
    std::vector<std::complex<double>> a;       ///< cavity amplitude
    std::vector<double> p;                     ///< mean inversion sum_j rho_j <sigma_z^j>
    std::vector<double> pbar_c;                ///< weighted threshold sum_j rho_j N C_j <sigma_z^j>
    std::vector<double> snapshot_t;            ///< times of sigma_z snapshots
    std::vector<std::vector<double>> sigma_z;  ///< one inversion profile per snapshot
    std::vector<double> packet_detuning;       ///< detunings of the snapshot columns (rad/s)
    SeriesMeta meta;

    std::size_t size() const { return t.size(); }

    double sample_dt() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }

    std::vector<double> abs_a() const {
        std::vector<double> m(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) m[i] = std::abs(a[i]);
        return m;
    }
};

}  // namespace mbloch
