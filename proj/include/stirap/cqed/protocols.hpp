#pragma once

#include "stirap/core/report.hpp"
#include "stirap/cqed/cavity.hpp"
#include "stirap/lambda/protocols.hpp"
#include "stirap/pulses/envelope.hpp"
#include "stirap/pulses/schedule.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

namespace stirap::cqed {

using pulses::Envelope;

/// v-STIRAP drive: the c-STIRAP schedule with the cavity coupling as the Stokes leg.
/// `protocol.omega0` is the frequency unit of the pump amplitude and detunings.
struct VStirapConfig {
    lambda::StirapConfig protocol;
    int sector = 0;
    bool full_space = true;
    /// Two-photon pump through |n g> in place of the b-e pump (sector model only).
    bool two_photon_pump = false;
    double delta2 = 20.0;
    double omega_p2 = 0.0;  // 0 picks the value giving an effective pump of kappa_p Omega0
};

struct VStirapFields {
    Envelope pump;
    RealFunction delta_p;
    RealFunction delta_s;
};

inline VStirapFields vstirap_fields(const lambda::StirapConfig& cfg) {
    if (!std::holds_alternative<lambda::CStirapFamily>(cfg.family))
        throw ContractViolation("v-STIRAP: drive config must select the c-STIRAP family");
    const auto& f = std::get<lambda::CStirapFamily>(cfg.family);
    const double tau_ch = f.tau_ch > 0.0 ? f.tau_ch : 0.6 * cfg.T;
    auto det = pulses::cstirap_detunings(cfg.omega0, f.h_delta, f.kappa_delta, cfg.tau, tau_ch);
    Envelope pump(pulses::Gaussian{cfg.kappa_p * cfg.omega0, f.t_c, cfg.T});
    Envelope ds = det.stokes, dp = det.pump;
    if (cfg.time_reversed) {
        pump = pump.reversed();
        ds = ds.reversed();
        dp = dp.reversed();
    }
    const double off = cfg.delta;
    // A static two-photon offset enters through the cavity detuning.
    return {pump, [dp](double t) { return dp(t); }, [ds, off](double t) { return ds(t) - off; }};
}

inline double photon_number(const Basis& b, const Vector& psi) {
    double n = 0.0;
    for (const auto& l : b.labels()) {
        n += std::stod(l.name) * std::norm(psi(static_cast<Eigen::Index>(l.index)));
    }
    return n;
}

/// P(n) over the photon number, summed over atomic states.
inline std::vector<double> photon_distribution(const Basis& b, const Vector& psi, int n_max) {
    std::vector<double> p(static_cast<std::size_t>(n_max + 1), 0.0);
    for (const auto& l : b.labels()) {
        p.at(static_cast<std::size_t>(std::stoi(l.name))) += std::norm(psi(static_cast<Eigen::Index>(l.index)));
    }
    return p;
}

namespace detail {

inline Trajectory run_vstirap_trajectory(const CavityAtomSystem& s, const VStirapConfig& c, const QuantumState& psi0) {
    const auto fl = vstirap_fields(c.protocol);
    const double tm = c.protocol.window();
    const auto grid = uniform_grid(-tm, tm, c.protocol.points);
    RealFunction pump = [p = fl.pump](double t) { return p(t); };
    if (c.two_photon_pump) {
        const double scale = c.protocol.kappa_p * c.protocol.omega0;
        const double om2 = c.omega_p2 > 0.0 ? c.omega_p2 : std::sqrt(2.0 * std::abs(c.delta2) * scale);
        // The Gaussian leg carries the timing, the other leg is always on.
        const double k = scale > 0.0 ? 2.0 * c.delta2 / om2 : 0.0;
        RealFunction p1 = [p = fl.pump, k](double t) { return k * p(t); };
        RealFunction p2 = [om2](double) { return om2; };
        return propagate(vstirap_two_photon_sector_hamiltonian(s, c.sector, p1, p2, c.delta2, fl.delta_p, fl.delta_s),
                         psi0, grid, c.protocol.propagation);
    }
    if (c.full_space) {
        return propagate(vstirap_full_hamiltonian(s, pump, fl.delta_p, fl.delta_s), psi0, grid, c.protocol.propagation);
    }
    return propagate(vstirap_sector_hamiltonian(s, c.sector, pump, fl.delta_p, fl.delta_s), psi0, grid,
                     c.protocol.propagation);
}

inline Basis vstirap_run_basis(const CavityAtomSystem& s, const VStirapConfig& c) {
    if (c.two_photon_pump)
        return Basis(std::vector<std::string>{fock_label(c.sector, 'b'), fock_label(c.sector, 'g'),
                                              fock_label(c.sector, 'e'), fock_label(c.sector + 1, 'g')});
    return c.full_space ? jc3_basis(s.n_max) : Basis(sector_labels(c.sector));
}

}  // namespace detail

/// Photon injection |n b> -> |n+1 g>.
inline ProtocolReport run_vstirap(const CavityAtomSystem& s, const VStirapConfig& c) {
    s.check();
    c.protocol.check();
    if (c.sector < 0 || c.sector + 1 > s.n_max) {
        std::ostringstream os;
        os << "run_vstirap: sector " << c.sector << " needs n + 1 <= N_max = " << s.n_max;
        throw ParameterError(os.str());
    }
    const Basis b = detail::vstirap_run_basis(s, c);
    const QuantumState psi0 = QuantumState::basis_state(b, fock_label(c.sector, 'b'));
    auto traj = std::make_shared<const Trajectory>(detail::run_vstirap_trajectory(s, c, psi0));
    ProtocolReport r = make_report("vstirap", traj, fock_label(c.sector + 1, 'g'), fock_label(c.sector, 'e'));
    r.scalars["photon_number"] = photon_number(b, traj->states().back());
    for (auto& w : s.warnings()) r.warnings.push_back(w);
    const auto& f = std::get<lambda::CStirapFamily>(c.protocol.family);
    if (f.h_delta <= 1.0) r.warnings.emplace_back(lambda::kWeakDetuningWarning);
    return r;
}

struct FockPumpingResult {
    std::vector<double> distribution;      // P(n), n = 0..N_max
    std::vector<double> cycle_efficiency;  // P(|k+1 g>) at the end of cycle k
    double mean_photons = 0.0;
    std::shared_ptr<const Trajectory> last_cycle;
};

/// Idealized fast decay |n g> -> |n b>, keeping all other amplitudes.
inline Vector relabel_g_to_b(const Basis& b, const Vector& psi, int n_max) {
    Vector out = psi;
    for (int n = 0; n <= n_max; ++n) {
        const auto ig = static_cast<Eigen::Index>(b.index_of(fock_label(n, 'g')));
        const auto ib = static_cast<Eigen::Index>(b.index_of(fock_label(n, 'b')));
        const double p = std::norm(out(ib)) + std::norm(out(ig));
        const Complex ref = std::abs(out(ib)) > 0.0 ? out(ib) / std::abs(out(ib)) : Complex(1.0);
        out(ib) = std::sqrt(p) * ref;
        out(ig) = 0.0;
    }
    return out.normalized();
}

/// Repeated v-STIRAP cycles with the same timing, each followed by the decay step.
inline FockPumpingResult fock_pumping_cycle(const CavityAtomSystem& s, int cycles, const VStirapConfig& c) {
    s.check();
    if (cycles < 0) throw ParameterError("fock_pumping_cycle: cycles must be nonnegative");
    if (cycles > s.n_max - 1) {
        std::ostringstream os;
        os << "fock_pumping_cycle: " << cycles << " cycles exceed N_max - 1 = " << s.n_max - 1;
        throw ParameterError(os.str());
    }
    VStirapConfig cc = c;
    cc.full_space = true;
    cc.two_photon_pump = false;
    const Basis b = jc3_basis(s.n_max);
    Vector psi = QuantumState::basis_state(b, "0b").amplitudes();
    FockPumpingResult out;
    for (int k = 0; k < cycles; ++k) {
        auto traj = std::make_shared<const Trajectory>(
            detail::run_vstirap_trajectory(s, cc, QuantumState::normalized(b, psi)));
        psi = traj->states().back();
        out.cycle_efficiency.push_back(std::norm(psi(static_cast<Eigen::Index>(b.index_of(fock_label(k + 1, 'g'))))));
        psi = relabel_g_to_b(b, psi, s.n_max);
        out.last_cycle = traj;
    }
    out.distribution = photon_distribution(b, psi, s.n_max);
    out.mean_photons = photon_number(b, psi);
    return out;
}

// ---------------------------------------------------------------------------
// Photon absorption / emission through the switchable coupling

struct PhotonAbsorptionConfig {
    double delta2 = 2.0;
    double omega_p1 = 0.4;  // peak of the trigger tone
    double omega_s = 0.0;   // Stokes peak; 0 matches the peak of the effective coupling
    double area = 15.0;     // peak effective coupling times T, used when T = 0
    double T = 0.0;
    double tau_ratio = 0.6;
    bool absorption = true;  // |1b> -> |0g>; false runs the reverse emission
    bool compensate = true;
    double t_max = 0.0;  // 0 picks 3 T + tau
    std::size_t points = 2000;
    PropagationOptions propagation{};
};

struct PhotonAbsorptionFields {
    Envelope p1, stokes;
    double T = 0.0, tau = 0.0, t_max = 0.0;
    FiveLevelDetunings detunings;
    pulses::PhaseModulation phase;
};

inline PhotonAbsorptionFields photon_absorption_fields(const CavityAtomSystem& s, const PhotonAbsorptionConfig& c) {
    if (c.delta2 == 0.0) throw ParameterError("photon absorption: delta2 = 0");
    PhotonAbsorptionFields f;
    const double gt = std::abs(switchable_coupling(s.g, c.omega_p1, c.delta2));
    f.T = c.T > 0.0 ? c.T : (gt > 0.0 ? c.area / gt : 0.0);
    if (!(f.T > 0.0)) throw ParameterError("photon absorption: set T, or a nonzero trigger amplitude and area");
    f.tau = c.tau_ratio * f.T;
    f.t_max = c.t_max > 0.0 ? c.t_max : 3.0 * f.T + f.tau;
    // The empty leg of the Lambda goes first.
    const double stokes_center = c.absorption ? -f.tau : f.tau;
    f.p1 = Envelope(pulses::Gaussian{c.omega_p1, -stokes_center, f.T});
    f.stokes = Envelope(pulses::Gaussian{c.omega_s > 0.0 ? c.omega_s : gt, stokes_center, f.T});
    if (c.compensate) {
        f.detunings.stokes = -switchable_shift_g(s.g, c.delta2);
        const double d2 = c.delta2;
        f.phase = pulses::PhaseModulation([p1 = f.p1, d2](double t) { return switchable_shift_p1(p1(t), d2); },
                                          -f.t_max, f.t_max, 20001);
    }
    return f;
}

inline TimeDependentHamiltonian photon_absorption_hamiltonian(const CavityAtomSystem& s,
                                                              const PhotonAbsorptionConfig& c) {
    const PhotonAbsorptionFields f = photon_absorption_fields(s, c);
    const double g = s.g, d2 = c.delta2;
    const bool comp = c.compensate;
    return TimeDependentHamiltonian(five_level_basis(), [=](double t) {
        return five_level_matrix(g, f.p1(t), f.stokes(t), d2, f.detunings, comp ? f.phase.phase(t) : 0.0);
    });
}

inline ProtocolReport run_photon_absorption_stirap(const CavityAtomSystem& s, const PhotonAbsorptionConfig& c) {
    const PhotonAbsorptionFields f = photon_absorption_fields(s, c);
    const std::string from = c.absorption ? "1b" : "0g", to = c.absorption ? "0g" : "1b";
    PropagationOptions opts = c.propagation;
    if (opts.max_step <= 0.0) opts.max_step = 0.25 / std::abs(c.delta2);
    auto traj = std::make_shared<const Trajectory>(propagate(photon_absorption_hamiltonian(s, c),
                                                             QuantumState::basis_state(five_level_basis(), from),
                                                             uniform_grid(-f.t_max, f.t_max, c.points), opts));
    ProtocolReport r = make_report(c.absorption ? "photon_absorption" : "photon_emission", traj, to, "0e");
    r.scalars["T"] = f.T;
    r.scalars["g_tilde_peak"] = std::abs(switchable_coupling(s.g, c.omega_p1, c.delta2));
    r.scalars["S_g"] = switchable_shift_g(s.g, c.delta2);
    r.scalars["S_p1_peak"] = switchable_shift_p1(c.omega_p1, c.delta2);
    r.scalars["peak_1g"] = traj->peak_population("1g");
    return r;
}

}  // namespace stirap::cqed
