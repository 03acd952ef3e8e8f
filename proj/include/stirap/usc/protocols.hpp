#pragma once

#include "stirap/core/report.hpp"
#include "stirap/pulses/envelope.hpp"
#include "stirap/pulses/phase.hpp"
#include "stirap/usc/rabi.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

namespace stirap::usc {

using pulses::Envelope;

/// Lowest eigenstates of H0 with the b-g and g-e dipole operators expressed in them.
struct DressedBasis {
    std::vector<DressedLevel> levels;
    Basis basis;
    RealVector energies;
    RealMatrix v_bg;  // <a| (|b><g| + |g><b|) |b>
    RealMatrix v_ge;  // <a| (|g><e| + |e><g|) |b>
    double e0 = 0.0;
    double c00 = 1.0;
    double c02 = 0.0;

    Eigen::Index index(const std::string& label) const { return static_cast<Eigen::Index>(basis.index_of(label)); }
};

inline DressedBasis make_dressed_basis(const RabiSystem& s, std::size_t count = 19) {
    s.check();
    const EigenSystem es = rabi_eigensystem(s);
    const auto lv = dressed_levels(s, es.values, count);
    if (lv.size() < count) throw ParameterError("make_dressed_basis: truncation too small for requested dressed states");
    for (const auto& l : lv) {
        if (l.kind != LevelKind::Dressed) continue;
        double edge = 0.0;
        for (int n = std::max(0, s.n_max - 1); n <= s.n_max; ++n)
            edge += std::norm(es.vectors(2 * n, l.index)) + std::norm(es.vectors(2 * n + 1, l.index));
        if (edge > 1e-10) {
            std::ostringstream os;
            os << "make_dressed_basis: " << l.label() << " has weight " << edge
               << " on the top Fock levels; N_max = " << s.n_max << " too small";
            throw ParameterError(os.str());
        }
    }
    if (!std::any_of(lv.begin(), lv.end(), [](const DressedLevel& l) { return l.label() == "2b"; }) ||
        !std::any_of(lv.begin(), lv.end(), [](const DressedLevel& l) { return l.label() == "Phi0"; })) {
        throw ParameterError("make_dressed_basis: retained states must include 0b, 2b and Phi0");
    }

    DressedBasis d;
    d.levels = lv;
    std::vector<std::string> names;
    for (const auto& l : lv) names.push_back(l.label());
    d.basis = Basis(names);
    const auto k = static_cast<Eigen::Index>(lv.size());
    d.energies.resize(k);
    d.v_bg = RealMatrix::Zero(k, k);
    d.v_ge = RealMatrix::Zero(k, k);
    for (Eigen::Index a = 0; a < k; ++a) d.energies(a) = lv[static_cast<std::size_t>(a)].energy;
    for (Eigen::Index a = 0; a < k; ++a) {
        const auto& la = lv[static_cast<std::size_t>(a)];
        for (Eigen::Index b = 0; b < k; ++b) {
            const auto& lb = lv[static_cast<std::size_t>(b)];
            if (la.kind == LevelKind::Ladder && lb.kind == LevelKind::Dressed) {
                if (la.index <= s.n_max) d.v_bg(a, b) = es.vectors(2 * la.index, lb.index).real();
            } else if (la.kind == LevelKind::Dressed && lb.kind == LevelKind::Ladder) {
                if (lb.index <= s.n_max) d.v_bg(a, b) = es.vectors(2 * lb.index, la.index).real();
            } else if (la.kind == LevelKind::Dressed && lb.kind == LevelKind::Dressed) {
                double x = 0.0;
                for (int n = 0; n <= s.n_max; ++n) {
                    x += es.vectors(2 * n, la.index).real() * es.vectors(2 * n + 1, lb.index).real() +
                         es.vectors(2 * n + 1, la.index).real() * es.vectors(2 * n, lb.index).real();
                }
                d.v_ge(a, b) = x;
            }
        }
    }
    d.e0 = es.values(0);
    d.c00 = es.vectors(0, 0).real();
    d.c02 = es.vectors(4, 0).real();
    return d;
}

/// Drive W(t) = Ws(t) cos(ws t + phi_s(t)) + Wp(t) cos(wp t + phi_p(t)) on b-g, and eta W(t) on g-e.
struct UscDrive {
    Envelope pump, stokes;
    double omega_p = 0.0, omega_s = 0.0;
    double stray_ratio = 0.0;
    std::optional<pulses::PhaseModulation> stokes_phase, pump_phase;

    double field(double t) const {
        const double fs = stokes_phase ? stokes_phase->phase(t) : 0.0;
        const double fp = pump_phase ? pump_phase->phase(t) : 0.0;
        return stokes(t) * std::cos(omega_s * t + fs) + pump(t) * std::cos(omega_p * t + fp);
    }
};

inline RealMatrix drive_operator(const DressedBasis& d, double stray_ratio) { return d.v_bg + stray_ratio * d.v_ge; }

/// Lab frame H0 + H_c(t) in the dressed basis.
inline TimeDependentHamiltonian usc_control_hamiltonian(const DressedBasis& d, const UscDrive& drive) {
    const Matrix h0 = d.energies.cast<Complex>().asDiagonal();
    const Matrix v = drive_operator(d, drive.stray_ratio).cast<Complex>();
    return TimeDependentHamiltonian(d.basis, [h0, v, drive](double t) -> Matrix { return h0 + drive.field(t) * v; });
}

/// Same dynamics in the interaction picture of H0; populations coincide with the lab frame.
inline TimeDependentHamiltonian usc_interaction_hamiltonian(const DressedBasis& d, const UscDrive& drive) {
    const Matrix v = drive_operator(d, drive.stray_ratio).cast<Complex>();
    const RealVector e = d.energies;
    TimeDependentHamiltonian h(d.basis, [v, e, drive](double t) -> Matrix {
        const Vector ph = (I * t * e.cast<Complex>()).array().exp().matrix();
        return drive.field(t) * (ph.asDiagonal() * v * ph.conjugate().asDiagonal());
    });
    const RealMatrix vr = drive_operator(d, drive.stray_ratio);
    h.with_action([vr, e, drive](double t, const Vector& psi) -> Vector {
        const Vector ph = (I * t * e.cast<Complex>()).array().exp().matrix();
        const Vector x = ph.conjugate().cwiseProduct(psi);
        Vector y(x.size());
        y.real() = vr * x.real();
        y.imag() = vr * x.imag();
        return drive.field(t) * ph.cwiseProduct(y);
    });
    return h;
}

/// Light shift of the pump transition by the Stokes tone on 0b-Phi0.
inline pulses::RealFunction stark_shift_S0(const RabiSystem& s, const Envelope& ws, double omega_s) {
    const auto es = rabi_eigensystem(s);
    const double e0 = es.values(0), c00 = es.vectors(0, 0).real();
    const double den = e0 + s.eps_b - omega_s;
    if (den == 0.0) throw ParameterError("stark_shift_S0: E0 + eps_b = omega_s, Stokes tone resonant with the pump line");
    return [=](double t) {
        const double a = c00 * ws(t);
        return a * a / (4.0 * den);
    };
}

/// Second-order shift coefficient of level k for a tone A cos(w t): shift = coeff * A^2.
/// Both the corotating and counterrotating denominators are kept; `skip` drops one partner.
inline double stark_coefficient(const DressedBasis& d, const RealMatrix& v, Eigen::Index k, double w,
                                Eigen::Index skip = -1) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < d.energies.size(); ++j) {
        if (j == k || j == skip || v(k, j) == 0.0) continue;
        const double de = d.energies(k) - d.energies(j);
        s += 0.25 * v(k, j) * v(k, j) * (1.0 / (de + w) + 1.0 / (de - w));
    }
    return s;
}

/// Shift of a transition from all off-resonant couplings of both tones.
struct TwoPhotonStark {
    double stokes_coeff = 0.0;  // times Ws(t)^2
    double pump_coeff = 0.0;    // times Wp(t)^2

    double operator()(double ws, double wp) const { return stokes_coeff * ws * ws + pump_coeff * wp * wp; }
};

inline TwoPhotonStark two_photon_stark(const DressedBasis& d, double stray_ratio, double omega_p, double omega_s) {
    const RealMatrix v = drive_operator(d, stray_ratio);
    const auto i0 = d.index("0b"), i2 = d.index("2b"), ip = d.index("Phi0");
    TwoPhotonStark out;
    out.stokes_coeff = stark_coefficient(d, v, i2, omega_s, ip) - stark_coefficient(d, v, i0, omega_s);
    out.pump_coeff = stark_coefficient(d, v, i2, omega_p) - stark_coefficient(d, v, i0, omega_p, ip);
    return out;
}

/// Same for the pump line 0b-Phi0.
inline TwoPhotonStark pump_line_stark(const DressedBasis& d, double stray_ratio, double omega_p, double omega_s) {
    const RealMatrix v = drive_operator(d, stray_ratio);
    const auto i0 = d.index("0b"), i2 = d.index("2b"), ip = d.index("Phi0");
    TwoPhotonStark out;
    out.stokes_coeff = stark_coefficient(d, v, ip, omega_s, i2) - stark_coefficient(d, v, i0, omega_s);
    out.pump_coeff = stark_coefficient(d, v, ip, omega_p, i0) - stark_coefficient(d, v, i0, omega_p, ip);
    return out;
}

enum class Compensation { None, PhaseModulation };

struct UscStirapConfig {
    std::size_t states = 19;
    double stokes_amplitude = 0.3;  // max Ws
    double area = 15.0;             // max Omega_s T, used when T = 0
    double T = 0.0;
    double tau_ratio = 0.6;
    double delta_p = 0.0;
    std::optional<double> delta_s;  // defaults to delta_p
    bool attenuate = true;          // Wp = kappa_p Ws with kappa_p = c02 / c00
    double pump_ratio = 1.0;        // used when attenuate is off
    double stray_ratio = 0.0;       // g-e coupling relative to b-g
    Compensation compensation = Compensation::None;
    bool check_truncation = false;
    double t_max = 0.0;
    std::size_t points = 2000;
    // Drift stays near 3e-11 here; the library default would triple the run time.
    PropagationOptions propagation{Backend::RungeKutta45, 1e-10, 1e-12};
};

struct UscSchedule {
    DressedBasis dressed;
    UscDrive drive;
    double T = 0.0, tau = 0.0, t_max = 0.0;
    double omega_peak = 0.0;  // c02 max Ws
    TwoPhotonStark stark;      // 2b - 0b
    TwoPhotonStark pump_line;  // Phi0 - 0b
};

inline UscSchedule usc_schedule(const RabiSystem& s, const UscStirapConfig& c, std::size_t states) {
    UscSchedule u;
    u.dressed = make_dressed_basis(s, states);
    const DressedBasis& d = u.dressed;
    const double kappa = std::abs(d.c02 / d.c00);
    u.omega_peak = std::abs(d.c02) * c.stokes_amplitude;
    u.T = c.T > 0.0 ? c.T : (u.omega_peak > 0.0 ? c.area / u.omega_peak : 0.0);
    if (!(u.T > 0.0)) throw ParameterError("run_usc_stirap: T undefined; set T or a coupling with c02 != 0");
    u.tau = c.tau_ratio * u.T;
    u.t_max = c.t_max > 0.0 ? c.t_max : 3.0 * u.T + u.tau;
    const double dp = c.delta_p, ds = c.delta_s.value_or(c.delta_p);
    u.drive.omega_p = s.eps_b + d.e0 - dp;
    u.drive.omega_s = s.eps_b - 2.0 * s.omega_c + d.e0 - ds;
    const double wp = (c.attenuate ? kappa : c.pump_ratio) * c.stokes_amplitude;
    u.drive.stokes = Envelope(pulses::Gaussian{c.stokes_amplitude, -u.tau, u.T});
    u.drive.pump = Envelope(pulses::Gaussian{wp, u.tau, u.T});
    u.drive.stray_ratio = c.stray_ratio;
    u.stark = two_photon_stark(d, c.stray_ratio, u.drive.omega_p, u.drive.omega_s);
    u.pump_line = pump_line_stark(d, c.stray_ratio, u.drive.omega_p, u.drive.omega_s);
    if (c.compensation == Compensation::PhaseModulation) {
        // Phase rates shift the tone frequencies. The pump follows the shifted
        // Phi0 - 0b line, the Stokes keeps wp - ws on the shifted 2b - 0b gap.
        const auto ws = u.drive.stokes, wpe = u.drive.pump;
        const auto st = u.stark, pl = u.pump_line;
        u.drive.pump_phase = pulses::PhaseModulation([=](double t) { return pl(ws(t), wpe(t)); }, -u.t_max, u.t_max,
                                                     40001);
        u.drive.stokes_phase = pulses::PhaseModulation(
            [=](double t) { return pl(ws(t), wpe(t)) - st(ws(t), wpe(t)); }, -u.t_max, u.t_max, 40001);
    }
    return u;
}

namespace detail {

inline std::shared_ptr<const Trajectory> run_usc_trajectory(const UscSchedule& u, const UscStirapConfig& c) {
    PropagationOptions opts = c.propagation;
    const auto grid = uniform_grid(-u.t_max, u.t_max, c.points);
    return std::make_shared<const Trajectory>(propagate(usc_interaction_hamiltonian(u.dressed, u.drive),
                                                        QuantumState::basis_state(u.dressed.basis, "0b"), grid, opts));
}

}  // namespace detail

/// STIRAP 0b -> 2b through the virtual Phi0, in the truncated dressed space.
inline ProtocolReport run_usc_stirap(const RabiSystem& s, const UscStirapConfig& c) {
    const UscSchedule u = usc_schedule(s, c, c.states);
    auto traj = detail::run_usc_trajectory(u, c);
    ProtocolReport r = make_report("usc_stirap", traj, "2b", "Phi0");
    r.scalars["T"] = u.T;
    r.scalars["omega_s_peak"] = u.omega_peak;
    r.scalars["c00"] = u.dressed.c00;
    r.scalars["c02"] = u.dressed.c02;
    r.scalars["E0"] = u.dressed.e0;
    r.scalars["omega_p"] = u.drive.omega_p;
    r.scalars["omega_s"] = u.drive.omega_s;
    r.scalars["kappa_p"] = std::abs(u.dressed.c02 / u.dressed.c00);
    r.scalars["two_photon_shift_peak"] = u.stark(c.stokes_amplitude, 0.0);
    r.scalars["pump_line_shift_peak"] = u.pump_line(c.stokes_amplitude, 0.0);
    r.scalars["S0_peak"] =
        u.dressed.c00 * u.dressed.c00 * c.stokes_amplitude * c.stokes_amplitude /
        (4.0 * (u.dressed.e0 + s.eps_b - u.drive.omega_s));
    for (auto& w : s.warnings()) r.warnings.push_back(w);
    if (c.check_truncation) {
        const UscSchedule big = usc_schedule(s, c, c.states + 10);
        const double eff = detail::run_usc_trajectory(big, c)->final_population("2b");
        r.scalars["truncation_delta"] = std::abs(eff - r.transfer_efficiency);
        if (std::abs(eff - r.transfer_efficiency) > 0.01) {
            std::ostringstream os;
            os << "dressed-state truncation not converged: efficiency changes by " << eff - r.transfer_efficiency
               << " with " << c.states + 10 << " states";
            r.warnings.push_back(os.str());
        }
    }
    return r;
}

}  // namespace stirap::usc
