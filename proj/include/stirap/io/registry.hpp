#pragma once

#include "stirap/cqed/protocols.hpp"
#include "stirap/io/emit.hpp"
#include "stirap/lambda/protocols.hpp"
#include "stirap/usc/protocols.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace stirap::io {

using Runner = RunResult (*)(const ParameterSet&, std::size_t points);

struct ProtocolEntry {
    ProtocolSchema schema;
    Runner run = nullptr;
};

namespace detail {

using VT = ValueType;

inline std::vector<KeySpec> lambda_common() {
    return {
        required("Omega0", VT::Real, "peak Rabi frequency of the Stokes pulse"),
        required("T", VT::Real, "Gaussian width, 1/Omega0"),
        optional_key("kappa_p", VT::Real, "1", "pump peak / Omega0"),
        optional_key("delta", VT::Real, "0", "static two-photon detuning"),
        optional_key("delta_p", VT::Real, "0", "static single-photon detuning of the pump"),
        optional_key("time_reversed", VT::Boolean, "false", "mirror the schedule and run |1> -> |0>"),
        optional_key("t_max", VT::Real, "0", "half window; 0 picks 3T + tau"),
    };
}

inline lambda::StirapConfig lambda_base(const ParameterSet& p, std::size_t points) {
    lambda::StirapConfig c;
    c.omega0 = p.real("Omega0");
    c.kappa_p = p.real("kappa_p");
    c.T = p.real("T");
    c.delta = p.real("delta");
    c.delta_p = p.real("delta_p");
    c.time_reversed = p.boolean("time_reversed");
    c.t_max = p.real("t_max");
    c.points = points;
    return c;
}

inline RunResult run_lambda_stirap(const ParameterSet& p, std::size_t points) {
    lambda::StirapConfig c = lambda_base(p, points);
    c.tau = p.real("tau_ratio") * c.T;
    c.order = p.text("order") == "intuitive" ? pulses::PulseOrder::Intuitive : pulses::PulseOrder::Counterintuitive;
    c.family = lambda::StandardFamily{};
    return result_from_report(lambda::run_stirap(lambda::LambdaSystem{}, c));
}

inline RunResult run_lambda_2plus1(const ParameterSet& p, std::size_t points) {
    lambda::StirapConfig c = lambda_base(p, points);
    lambda::TwoPlusOneFamily f;
    f.omega_p1 = f.omega_p2 = c.omega0;
    f.delta2 = p.real("delta2");
    f.always_on = p.text("always_on") == "p1" ? lambda::AlwaysOn::P1 : lambda::AlwaysOn::P2;
    f.compensate = p.boolean("compensate");
    f.match_peaks = p.boolean("match_peaks");
    f.stokes_amplitude = p.real("stokes_amplitude");
    f.coarse_window = p.real("coarse_window");
    f.samples_per_bin = static_cast<std::size_t>(std::max(1L, p.integer("samples_per_bin")));
    // T given as a pulse area of the larger effective coupling.
    if (!(c.T > 0.0)) {
        const double peak = std::max(f.effective_peak(), f.stokes_peak());
        if (!(peak > 0.0)) throw ParameterError("stirap_2plus1: zero effective coupling, set T");
        c.T = p.real("area") / peak;
    }
    c.tau = p.real("tau_ratio") * c.T;
    c.family = f;
    return result_from_report(lambda::run_stirap_2plus1(lambda::LambdaSystem{}, c));
}

inline lambda::CStirapFamily cstirap_family(const ParameterSet& p, double T, double tau) {
    lambda::CStirapFamily f;
    f.h_delta = p.real("h_delta");
    f.kappa_delta = p.real("kappa_delta");
    f.tau_ch = p.real("tau_ch_ratio") * T;
    f.t_c = p.real("tc_ratio") * tau;
    return f;
}

inline std::vector<KeySpec> cstirap_keys() {
    return {
        optional_key("tau_ratio", VT::Real, "2", "tanh switching time of the detunings / T"),
        optional_key("tc_ratio", VT::Real, "0.8", "pump center / tau"),
        optional_key("h_delta", VT::Real, "10", "asymptotic detuning / Omega0"),
        optional_key("kappa_delta", VT::Real, "1.2", "pump / Stokes detuning ratio"),
        optional_key("tau_ch_ratio", VT::Real, "0.6", "tanh rise time / T"),
    };
}

inline RunResult run_lambda_cstirap(const ParameterSet& p, std::size_t points) {
    lambda::StirapConfig c = lambda_base(p, points);
    c.tau = p.real("tau_ratio") * c.T;
    c.family = cstirap_family(p, c.T, c.tau);
    return result_from_report(lambda::run_cstirap(lambda::LambdaSystem{}, c));
}

inline std::vector<KeySpec> cavity_keys(const std::string& g_default, const std::string& eps_b_default) {
    std::vector<KeySpec> k;
    if (g_default.empty())
        k.push_back(required("g", VT::Real, "atom-cavity coupling"));
    else
        k.push_back(optional_key("g", VT::Real, g_default, "atom-cavity coupling"));
    k.push_back(optional_key("omega_c", VT::Real, "1", "cavity frequency"));
    k.push_back(optional_key("eps", VT::Real, "1", "g-e splitting"));
    k.push_back(optional_key("eps_b", VT::Real, eps_b_default, "depth of |b> below |g>"));
    k.push_back(optional_key("n_max", VT::Integer, "10", "Fock truncation"));
    return k;
}

inline cqed::CavityAtomSystem cavity_system(const ParameterSet& p) {
    cqed::CavityAtomSystem s;
    s.g = p.real("g");
    s.omega_c = p.real("omega_c");
    s.eps = p.real("eps");
    s.eps_b = p.real("eps_b");
    s.n_max = static_cast<int>(p.integer("n_max"));
    return s;
}

inline std::vector<KeySpec> vstirap_keys() {
    auto k = cavity_keys("", "5");
    for (auto& x : std::vector<KeySpec>{
             required("Omega0T", VT::Real, "pulse width times Omega0 = 2 g"),
             optional_key("kappa_p", VT::Real, "1", "pump peak / Omega0"),
             optional_key("delta", VT::Real, "0", "static two-photon offset, units of Omega0"),
             optional_key("sector", VT::Integer, "0", "initial |n b>"),
             optional_key("full_space", VT::Boolean, "true", "run on the whole truncated space"),
             optional_key("two_photon_pump", VT::Boolean, "false", "pump |n b> - |n e> through |n g>"),
             optional_key("delta2", VT::Real, "20", "two-photon pump intermediate detuning / Omega0"),
             optional_key("t_max", VT::Real, "0", "half window in 1/Omega0; 0 picks 3T + tau"),
         })
        k.push_back(x);
    for (auto& x : cstirap_keys()) k.push_back(x);
    return k;
}

inline cqed::VStirapConfig vstirap_config(const ParameterSet& p, const cqed::CavityAtomSystem& s,
                                          std::size_t points) {
    cqed::VStirapConfig c;
    const double om = 2.0 * s.g;
    if (!(om > 0.0)) throw ParameterError("v-STIRAP: g must be positive");
    lambda::StirapConfig& q = c.protocol;
    q.omega0 = om;
    q.kappa_p = p.real("kappa_p");
    q.T = p.real("Omega0T") / om;
    q.tau = p.real("tau_ratio") * q.T;
    q.delta = p.real("delta") * om;
    q.t_max = p.real("t_max") / om;
    q.points = points;
    q.family = cstirap_family(p, q.T, q.tau);
    c.sector = static_cast<int>(p.integer("sector"));
    c.full_space = p.boolean("full_space");
    c.two_photon_pump = p.boolean("two_photon_pump");
    c.delta2 = p.real("delta2") * om;
    return c;
}

inline RunResult run_cqed_vstirap(const ParameterSet& p, std::size_t points) {
    const auto s = cavity_system(p);
    return result_from_report(cqed::run_vstirap(s, vstirap_config(p, s, points)));
}

inline RunResult run_cqed_fock(const ParameterSet& p, std::size_t points) {
    const auto s = cavity_system(p);
    const long cycles = p.integer("cycles");
    const auto f = cqed::fock_pumping_cycle(s, static_cast<int>(cycles), vstirap_config(p, s, points));
    RunResult r;
    r.protocol = "fock_pumping";
    r.scalars["mean_photons"] = f.mean_photons;
    r.scalars["cycles"] = static_cast<double>(cycles);
    if (cycles > 0) {
        r.transfer_efficiency = f.distribution[static_cast<std::size_t>(cycles)];
        r.peak_transient = f.last_cycle->peak_population(cqed::fock_label(static_cast<int>(cycles) - 1, 'e'));
        r.tables.push_back(trajectory_table(*f.last_cycle, "last_cycle_populations"));
        r.diagnostics = f.last_cycle->diagnostics();
        r.has_dynamics = true;
        r.scalars["max_norm_drift"] = r.diagnostics.max_norm_drift;
    }
    Table dist;
    dist.name = "photon_distribution";
    std::vector<double> n;
    for (std::size_t i = 0; i < f.distribution.size(); ++i) n.push_back(static_cast<double>(i));
    dist.add_column("n", n);
    dist.add_column("P_n", f.distribution);
    r.tables.push_back(dist);
    Table cyc;
    cyc.name = "cycles";
    std::vector<double> k;
    for (std::size_t i = 0; i < f.cycle_efficiency.size(); ++i) k.push_back(static_cast<double>(i + 1));
    cyc.add_column("cycle", k);
    cyc.add_column("efficiency", f.cycle_efficiency);
    r.tables.push_back(cyc);
    for (std::size_t i = 0; i < f.distribution.size(); ++i)
        r.final_populations["n=" + std::to_string(i)] = f.distribution[i];
    return r;
}

inline RunResult run_cqed_absorption(const ParameterSet& p, std::size_t points) {
    const auto s = cavity_system(p);
    cqed::PhotonAbsorptionConfig c;
    c.delta2 = p.real("delta2");
    c.omega_p1 = p.real("omega_p1");
    c.omega_s = p.real("omega_s");
    c.area = p.real("area");
    c.T = p.real("T");
    c.tau_ratio = p.real("tau_ratio");
    c.absorption = p.boolean("absorption");
    c.compensate = p.boolean("compensate");
    c.t_max = p.real("t_max");
    c.points = points;
    return result_from_report(cqed::run_photon_absorption_stirap(s, c));
}

inline std::vector<KeySpec> rabi_keys(const std::string& g_default) {
    return {
        optional_key("g", VT::Real, g_default, "ultrastrong coupling"),
        optional_key("eps", VT::Real, "1", "g-e splitting"),
        optional_key("eps_b", VT::Real, "5", "depth of |b> below |g>"),
        optional_key("n_max", VT::Integer, "30", "Fock truncation"),
    };
}

inline usc::RabiSystem rabi_system(const ParameterSet& p) {
    usc::RabiSystem s;
    s.g = p.real("g");
    s.eps = p.real("eps");
    s.eps_b = p.real("eps_b");
    s.n_max = static_cast<int>(p.integer("n_max"));
    return s;
}

inline std::vector<double> g_grid(const ParameterSet& p) {
    const double a = p.real("g_min"), b = p.real("g_max");
    const long n = p.integer("g_points");
    if (n < 1) throw ParameterError("g_points must be at least 1");
    if (!(b >= a)) throw ParameterError("need g_max >= g_min");
    std::vector<double> g;
    for (long i = 0; i < n; ++i) g.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    return g;
}

inline RunResult run_usc_spectrum(const ParameterSet& p, std::size_t) {
    const auto s = rabi_system(p);
    const auto levels = static_cast<std::size_t>(std::max(1L, p.integer("levels")));
    const auto sp = usc::spectrum_vs_g(s, g_grid(p), levels);
    RunResult r;
    r.protocol = "usc_spectrum";
    Table e, k;
    e.name = "spectrum";
    k.name = "level_kinds";
    e.add_column("g", sp.g);
    k.add_column("g", sp.g);
    for (std::size_t i = 0; i < levels; ++i) {
        std::vector<double> col, kind;
        for (std::size_t j = 0; j < sp.g.size(); ++j) {
            col.push_back(sp.energies[j][i]);
            kind.push_back(sp.kinds[j][i] == usc::LevelKind::Ladder ? 0.0 : 1.0);
        }
        e.add_column("E_" + std::to_string(i), col);
        k.add_column("kind_" + std::to_string(i), kind);
    }
    k.metadata["kind"] = "0: |n b> ladder, 1: Rabi dressed state";
    r.tables.push_back(e);
    r.tables.push_back(k);
    r.scalars["truncation_error"] = sp.truncation_error;
    for (auto& w : s.warnings()) r.warnings.push_back(w);
    return r;
}

inline RunResult run_usc_amplitudes(const ParameterSet& p, std::size_t) {
    const auto s = rabi_system(p);
    s.check();
    RunResult r;
    r.protocol = "usc_amplitudes";
    const auto a = usc::ground_state_amplitudes(s, {0, 1, 2});
    Table amp;
    amp.name = "amplitudes";
    std::vector<double> n;
    for (int i = 0; i <= s.n_max; ++i) n.push_back(i);
    amp.add_column("n", n);
    const char* tag[] = {"0", "1m", "1p"};
    for (std::size_t j = 0; j < 3; ++j) {
        amp.add_column(std::string("c") + tag[j] + "n", a.c[j]);
        amp.add_column(std::string("d") + tag[j] + "n", a.d[j]);
    }
    r.tables.push_back(amp);

    Table at;
    at.name = "attenuation";
    const auto grid = g_grid(p);
    std::vector<double> c00, c02, d1m0, d1m2, d1p0, d1p2, kp, kvm, kvp;
    for (double g : grid) {
        const auto sg = s.with_g(g * s.omega_c);
        const auto b = usc::ground_state_amplitudes(sg, {0, 1, 2});
        c00.push_back(b.c[0][0]);
        c02.push_back(b.c[0][2]);
        d1m0.push_back(b.d[1][0]);
        d1m2.push_back(b.d[1][2]);
        d1p0.push_back(b.d[2][0]);
        d1p2.push_back(b.d[2][2]);
        kp.push_back(b.c[0][2] / b.c[0][0]);
        kvm.push_back(b.d[1][0] != 0.0 ? b.d[1][2] / b.d[1][0] : std::numeric_limits<double>::quiet_NaN());
        kvp.push_back(b.d[2][0] != 0.0 ? b.d[2][2] / b.d[2][0] : std::numeric_limits<double>::quiet_NaN());
    }
    at.add_column("g", grid);
    at.add_column("c00", c00);
    at.add_column("c02", c02);
    at.add_column("d1m0", d1m0);
    at.add_column("d1m2", d1m2);
    at.add_column("d1p0", d1p0);
    at.add_column("d1p2", d1p2);
    at.add_column("kappa_p", kp);
    at.add_column("kappa_v_minus", kvm);
    at.add_column("kappa_v_plus", kvp);
    r.tables.push_back(at);

    r.scalars["c00"] = a.c[0][0];
    r.scalars["c02"] = a.c[0][2];
    r.scalars["kappa_p"] = usc::optimal_pump_attenuation(s);
    const auto kv = usc::v_scheme_attenuation(s);
    r.scalars["kappa_v_minus"] = kv.first;
    r.scalars["kappa_v_plus"] = kv.second;
    for (auto& w : s.warnings()) r.warnings.push_back(w);
    return r;
}

inline usc::UscStirapConfig usc_config(const ParameterSet& p, std::size_t points) {
    usc::UscStirapConfig c;
    c.states = static_cast<std::size_t>(std::max(3L, p.integer("states")));
    c.stokes_amplitude = p.real("stokes_amplitude");
    c.area = p.real("area");
    c.T = p.real("T");
    c.tau_ratio = p.real("tau_ratio");
    c.delta_p = p.real("delta_p");
    if (!std::isnan(p.real("delta_s"))) c.delta_s = p.real("delta_s");
    c.attenuate = p.boolean("attenuate");
    c.pump_ratio = p.real("pump_ratio");
    c.stray_ratio = p.real("stray_ratio");
    c.check_truncation = p.boolean("check_truncation");
    c.t_max = p.real("t_max");
    c.points = points;
    return c;
}

inline RunResult run_usc_stirap(const ParameterSet& p, std::size_t points) {
    const auto s = rabi_system(p);
    usc::UscStirapConfig c = usc_config(p, points);
    const std::string mode = p.text("compensation");
    if (mode != "both") {
        c.compensation = mode == "phase" ? usc::Compensation::PhaseModulation : usc::Compensation::None;
        return result_from_report(usc::run_usc_stirap(s, c));
    }
    c.compensation = usc::Compensation::None;
    const RunResult plain = result_from_report(usc::run_usc_stirap(s, c));
    c.compensation = usc::Compensation::PhaseModulation;
    RunResult r = result_from_report(usc::run_usc_stirap(s, c));
    r.tables.front().name = "populations_compensated";
    Table t = plain.tables.front();
    t.name = "populations_uncompensated";
    r.tables.push_back(t);
    r.scalars["efficiency_compensated"] = r.transfer_efficiency;
    r.scalars["efficiency_uncompensated"] = plain.transfer_efficiency;
    r.scalars["peak_transient_uncompensated"] = plain.peak_transient;
    r.scalars["max_norm_drift"] = std::max(r.scalars["max_norm_drift"], plain.scalars.at("max_norm_drift"));
    r.diagnostics.max_norm_drift = std::max(r.diagnostics.max_norm_drift, plain.diagnostics.max_norm_drift);
    r.diagnostics.accepted_steps += plain.diagnostics.accepted_steps;
    r.diagnostics.rejected_steps += plain.diagnostics.rejected_steps;
    for (auto& w : plain.warnings)
        if (std::find(r.warnings.begin(), r.warnings.end(), w) == r.warnings.end()) r.warnings.push_back(w);
    return r;
}

inline std::vector<ProtocolEntry> build_registry() {
    std::vector<ProtocolEntry> out;
    {
        auto k = lambda_common();
        k.push_back(optional_key("tau_ratio", VT::Real, "0.6", "pulse delay / T"));
        k.push_back(optional_key("order", VT::Text, "counterintuitive", "pulse order", {"counterintuitive", "intuitive"}));
        out.push_back({{"lambda.stirap", "Omega0", "Gaussian STIRAP in the Lambda system", k}, &run_lambda_stirap});
    }
    {
        auto k = lambda_common();
        k.at(1) = optional_key("T", VT::Real, "0", "Gaussian width, 1/Omega0; 0 derives it from area");
        for (auto& x : std::vector<KeySpec>{
                 optional_key("tau_ratio", VT::Real, "0.6", "pulse delay / T"),
                 optional_key("delta2", VT::Real, "5", "detuning of the intermediate level, units of Omega0"),
                 optional_key("area", VT::Real, "50", "peak effective coupling times T"),
                 optional_key("always_on", VT::Text, "p2", "leg of the two-photon pump kept on", {"p1", "p2"}),
                 optional_key("compensate", VT::Boolean, "true", "phase-modulate the Stokes against the Stark shift"),
                 optional_key("match_peaks", VT::Boolean, "true", "Stokes peak equal to the effective pump peak"),
                 optional_key("stokes_amplitude", VT::Real, "0", "Stokes peak when match_peaks is off"),
                 optional_key("coarse_window", VT::Real, "0", "coarse-graining bin; 0 picks 10/delta2"),
                 optional_key("samples_per_bin", VT::Integer, "10", "output samples per bin"),
             })
            k.push_back(x);
        out.push_back({{"lambda.stirap_2plus1", "Omega0", "2+1 STIRAP with an always-on tone", k}, &run_lambda_2plus1});
    }
    {
        auto k = lambda_common();
        for (auto& x : cstirap_keys()) k.push_back(x);
        out.push_back({{"lambda.cstirap", "Omega0", "STIRAP by tanh detuning control", k}, &run_lambda_cstirap});
    }
    out.push_back({{"cqed.vstirap", "omega_c", "photon injection |n b> -> |n+1 g>", vstirap_keys()}, &run_cqed_vstirap});
    {
        auto k = vstirap_keys();
        k.push_back(optional_key("cycles", VT::Integer, "2", "number of injection cycles"));
        out.push_back({{"cqed.fock_pumping", "omega_c", "repeated v-STIRAP with ideal decay", k}, &run_cqed_fock});
    }
    {
        auto k = cavity_keys("0.1", "5");
        for (auto& x : std::vector<KeySpec>{
                 optional_key("delta2", VT::Real, "2", "detuning of |1g> in the five-level scheme"),
                 optional_key("omega_p1", VT::Real, "0.4", "trigger tone peak"),
                 optional_key("omega_s", VT::Real, "0", "Stokes peak; 0 matches the effective coupling"),
                 optional_key("area", VT::Real, "15", "peak effective coupling times T"),
                 optional_key("T", VT::Real, "0", "Gaussian width; 0 derives it from area"),
                 optional_key("tau_ratio", VT::Real, "0.6", "pulse delay / T"),
                 optional_key("absorption", VT::Boolean, "true", "|1b> -> |0g>; false runs emission"),
                 optional_key("compensate", VT::Boolean, "true", "cancel the switchable Stark shifts"),
                 optional_key("t_max", VT::Real, "0", "half window; 0 picks 3T + tau"),
             })
            k.push_back(x);
        out.push_back({{"cqed.photon_absorption", "omega_c", "photon absorption through a switchable coupling", k},
                       &run_cqed_absorption});
    }
    {
        auto k = rabi_keys("0.2");
        k.push_back(optional_key("g_min", VT::Real, "0", "first g/omega_c"));
        k.push_back(optional_key("g_max", VT::Real, "1", "last g/omega_c"));
        k.push_back(optional_key("g_points", VT::Integer, "101", "grid size"));
        k.push_back(optional_key("levels", VT::Integer, "16", "reported levels"));
        out.push_back({{"usc.spectrum", "omega_c", "dressed spectrum versus g", k}, &run_usc_spectrum});
    }
    {
        auto k = rabi_keys("0.2");
        k.push_back(optional_key("g_min", VT::Real, "0.01", "first g/omega_c of the attenuation scan"));
        k.push_back(optional_key("g_max", VT::Real, "0.5", "last g/omega_c of the attenuation scan"));
        k.push_back(optional_key("g_points", VT::Integer, "50", "scan size"));
        out.push_back({{"usc.amplitudes", "omega_c", "dressed-state amplitudes and attenuation ratios", k},
                       &run_usc_amplitudes});
    }
    {
        auto k = rabi_keys("0.2");
        for (auto& x : std::vector<KeySpec>{
                 optional_key("states", VT::Integer, "19", "retained dressed states"),
                 optional_key("stokes_amplitude", VT::Real, "0.11", "peak Stokes drive"),
                 optional_key("area", VT::Real, "15", "peak Stokes coupling times T"),
                 optional_key("T", VT::Real, "0", "Gaussian width; 0 derives it from area"),
                 optional_key("tau_ratio", VT::Real, "0.6", "pulse delay / T"),
                 optional_key("delta_p", VT::Real, "0", "pump detuning"),
                 optional_key("delta_s", VT::Real, "nan", "Stokes detuning; nan follows delta_p"),
                 optional_key("attenuate", VT::Boolean, "true", "pump peak = (c02/c00) Stokes peak"),
                 optional_key("pump_ratio", VT::Real, "1", "pump / Stokes peak when attenuate is off"),
                 optional_key("stray_ratio", VT::Real, "0.1", "g-e drive relative to b-g"),
                 optional_key("compensation", VT::Text, "both", "Stark-shift compensation", {"none", "phase", "both"}),
                 optional_key("check_truncation", VT::Boolean, "false", "rerun with 10 more states"),
                 optional_key("t_max", VT::Real, "0", "half window; 0 picks 3T + tau"),
             })
            k.push_back(x);
        out.push_back({{"usc.stirap", "omega_c", "STIRAP 0b -> 2b through the USC ground state", k}, &run_usc_stirap});
    }
    return out;
}

}  // namespace detail

inline const std::vector<ProtocolEntry>& protocols() {
    static const std::vector<ProtocolEntry> r = detail::build_registry();
    return r;
}

inline const ProtocolEntry* find_protocol(const std::string& name) {
    for (const auto& e : protocols())
        if (e.schema.protocol == name) return &e;
    return nullptr;
}

inline const ProtocolSchema* find_schema(const std::string& name) {
    const ProtocolEntry* e = find_protocol(name);
    return e ? &e->schema : nullptr;
}

}  // namespace stirap::io
