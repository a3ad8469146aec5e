#include "maserbloch/ensemble.hpp"

#include <cmath>

namespace mbloch {

double q_gaussian_density(double omega, double omega0, double fwhm, double q) {
    if (!(q > 1.0 && q < 3.0)) throw config_error("q_gaussian_density: q must satisfy 1 < q < 3");
    if (fwhm <= 0.0) throw config_error("q_gaussian_density: fwhm must be > 0");
    // delta_q such that the profile equals 1/2 at |omega - omega0| = fwhm/2.
    const double delta_q = 0.5 * fwhm * std::sqrt((q - 1.0) / (std::exp2(q - 1.0) - 1.0));
    const double x = (omega - omega0) / delta_q;
    const double base = 1.0 - (1.0 - q) * x * x;
    if (base <= 0.0) return 0.0;
    return std::pow(base, 1.0 / (1.0 - q));
}

EnsembleGrid discretize(const PhysicalParams& params, double span) {
    params.validate();
    if (span <= 0.0) throw config_error("discretize: span must be > 0");
    const std::size_t n = params.n_packets;

    EnsembleGrid grid;
    grid.span = span;
    grid.center = params.omega0() - params.omega_c;
    grid.packets.resize(n);
    grid.detuning.resize(n);
    grid.weight.resize(n);

    const double coupling = params.g_coll / std::sqrt(static_cast<double>(n));
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double frac = (n == 1) ? 0.5 : static_cast<double>(j) / static_cast<double>(n - 1);
        const double det = grid.center - span + 2.0 * span * frac;
        const double w = q_gaussian_density(det, grid.center, params.inhom_fwhm, params.q_shape);
        grid.packets[j] = SpinPacket{det, w, coupling};
        total += w;
    }
    for (std::size_t j = 0; j < n; ++j) {
        grid.packets[j].weight /= total;
        grid.detuning[j] = grid.packets[j].detuning;
        grid.weight[j] = grid.packets[j].weight;
    }
    return grid;
}

EnsembleGrid discretize(const PhysicalParams& params) {
    return discretize(params, params.span_factor * params.inhom_fwhm);
}

double packet_cooperativity(const SpinPacket& packet, double kappa, double gamma_perp) {
    if (kappa <= 0.0 || gamma_perp <= 0.0)
        throw config_error("packet_cooperativity: kappa and gamma_perp must be > 0");
    const double d = packet.detuning;
    return packet.coupling * packet.coupling / kappa * gamma_perp / (gamma_perp * gamma_perp + d * d);
}

std::vector<double> threshold_weights(const EnsembleGrid& grid, const PhysicalParams& params) {
    const double n = static_cast<double>(grid.size());
    std::vector<double> w(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        w[j] = grid.packets[j].weight * n *
               packet_cooperativity(grid.packets[j], params.kappa, params.gamma_perp);
    return w;
}

EnsembleCooperativity ensemble_cooperativity(const EnsembleGrid& grid, const PhysicalParams& params) {
    double c = 0.0;
    for (double w : threshold_weights(grid, params)) c += w;
    return EnsembleCooperativity{c, params.g_coll * params.g_coll / (params.kappa * c)};
}

DipoleEstimate nearest_neighbor_coupling(double concentration_ppm) {
    if (concentration_ppm <= 0.0)
        throw config_error("nearest_neighbor_coupling: concentration must be > 0");
    constexpr double carbon_density = 1.755e23 * 1e6;  // diamond lattice sites per m^3
    constexpr double mu0_over_4pi = 1e-7;              // T m / A
    constexpr double hbar = 1.0545718e-34;             // J s
    constexpr double mu = two_pi * 28e9;               // rad/s per T (28 MHz/mT)

    DipoleEstimate est;
    est.density = concentration_ppm * 1e-6 * carbon_density;
    est.distance = std::pow(est.density, -1.0 / 3.0);
    est.j_n = mu0_over_4pi * mu * mu * hbar / (est.distance * est.distance * est.distance);
    return est;
}

double derive_spin_count(double g_coll, double g0) {
    if (g0 <= 0.0) throw config_error("derive_spin_count: g0 must be > 0");
    return (g_coll / g0) * (g_coll / g0);
}

}  // namespace mbloch
