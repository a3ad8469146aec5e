#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maserbloch/ensemble.hpp"
#include "maserbloch/lmfit.hpp"
#include "maserbloch/timeseries.hpp"

namespace mbloch {

/// One emission pulse extracted from |a(t)|.
struct PulseFeature {
    double t_peak = 0.0;
    double peak_amplitude = 0.0;
    double fwhm = 0.0;                    ///< Gaussian-fit full width at half maximum (s)
    double phase_mean = 0.0;              ///< circular mean of arg a over the FWHM window (rad)
    double phase_flatness = 0.0;          ///< circular standard deviation (rad)
    double transform_bandwidth_hz = 0.0;  ///< 8 ln2 / (2 pi fwhm), Gaussian transform limit
    double spectral_bandwidth_hz = 0.0;   ///< measured FWHM of the pulse-window spectrum
};

/// Lorentzian profile fit of a power spectrum.
struct SpectrumFit {
    double f_center = 0.0;       ///< Hz, relative to the rotating frame
    double hwhm = 0.0;           ///< Hz
    double amplitude = 0.0;      ///< peak height above baseline
    double baseline = 0.0;
    double residual_norm = 0.0;
};

/// Saturating-exponential fit A(tau) = A_inf (1 - exp(-tau/T)).
struct RiseFit {
    double t_char = 0.0;  ///< characteristic timescale T (s)
    double a_inf = 0.0;
    double residual_norm = 0.0;
    bool low_confidence = false;  ///< data span or covariance insufficient to pin T
};

struct Spectrum {
    std::vector<double> freq_hz;  ///< ascending, centered on 0
    std::vector<double> power;    ///< |A_k|^2 / M; sums to the windowed time-domain energy
    double resolution_hz = 0.0;
};

enum class Window { rectangular, hann };

struct HoleProfile {
    double depth = 0.0;   ///< reference inversion minus minimum inversion
    double width = 0.0;   ///< FWHM of the dip (rad/s)
    double center = 0.0;  ///< detuning of the minimum (rad/s)
};

struct DetectOptions {
    double min_prominence = 0.05;  ///< fraction of the global |a| maximum
    double min_separation = 1e-6;  ///< s
};

/// Shift the rotating frame: a(t) <- a(t) exp(-i 2 pi f_if t).
TimeSeries demodulate(const TimeSeries& series, double f_if_hz);

/// Discrete power spectrum of the complex samples in [t_start, t_start + duration).
Spectrum power_spectrum(const TimeSeries& series, double t_start, double duration,
                        Window window = Window::rectangular);

/// Nonlinear least squares of A / (1 + ((f - f0)/hwhm)^2) + baseline.
/// Requires a dominant peak (max power > 10x median).
SpectrumFit fit_lorentzian(const Spectrum& spectrum);

struct SlidingPoint {
    double t_f = 0.0;  ///< window start
    std::optional<SpectrumFit> fit;
    std::string error;  ///< set when the per-window fit failed
};

/// Lorentzian fit per shifted window; per-window failures are flagged, not fatal.
std::vector<SlidingPoint> sliding_spectrum(const TimeSeries& series, double window_duration,
                                           double stride);

/// Local maxima of |a| above the prominence and separation thresholds, each
/// refined by a Gaussian fit over +-2 estimated widths.
std::vector<PulseFeature> detect_pulses(const TimeSeries& series, const DetectOptions& opt = {});

/// Ratio of the inter-pulse |a| minimum to the smaller neighboring peak, one
/// entry per consecutive pulse pair. Ratios near 1 indicate merged pulses.
std::vector<double> pulse_valley_ratios(const TimeSeries& series,
                                        const std::vector<PulseFeature>& pulses);

/// Peak-to-peak delay between the initial superradiant decay and the first
/// revival. Throws analysis_error when fewer than two pulses are found.
double first_revival_delay(const TimeSeries& series, const DetectOptions& opt = {});
double first_revival_delay(const std::vector<PulseFeature>& pulses);

/// Fit A(tau) = A_inf (1 - exp(-tau/T)) to revival amplitudes vs hold time.
RiseFit fit_rise(std::span<const double> hold_times, std::span<const double> amplitudes);

/// Depth / width / center of the inversion dip in a sigma_z snapshot.
/// The reference level is the mean inversion of packets with
/// |Delta - center| > 1.5 W / 2. Returns nullopt when no dip rises above the
/// reference-region nose floor.
std::optional<HoleProfile> hole_profile(std::span<const double> sigma_z, const EnsembleGrid& grid,
                                        double inhom_fwhm);

/// Samples with t in [t0, t1], times left absolute.
TimeSeries slice_series(const TimeSeries& series, double t0, double t1);

}  // namespace mbloch
