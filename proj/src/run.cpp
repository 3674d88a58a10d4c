#include <fstream>
#include <iostream>
#include <sstream>

#include "qtime/analogue.hpp"
#include "qtime/arrival.hpp"
#include "qtime/causality.hpp"
#include "qtime/config.hpp"
#include "qtime/delay.hpp"
#include "qtime/parallel.hpp"
#include "qtime/scattering.hpp"

namespace qtime::cli {

namespace {

using F = std::string (*)(double);
constexpr F num = &format_number;

void write_meta(std::ostream& out, const RunConfig& c) {
    out << "# meta: tool=" << kToolName << "\n";
    out << "# meta: version=" << kToolVersion << "\n";
    std::istringstream lines(emit(c));
    std::string line;
    while (std::getline(lines, line)) {
        // Output location and thread count do not change results.
        if (line.rfind("out=", 0) == 0 || line.rfind("threads=", 0) == 0) continue;
        out << "# meta: " << line << "\n";
    }
}

QuadratureSettings quadrature_of(const RunConfig& c) {
    return {c.n_k, c.threads};
}

WavePacketSpec packet_of(const RunConfig& c) {
    return WavePacketSpec(c.m, *c.k0, *c.sigma_p, *c.x0);
}

void run_scatter(const RunConfig& c, std::ostream& out) {
    const auto ks = c.k_range->values();
    std::vector<ScatteringData> rows(ks.size());
    parallel_for(ks.size(), c.threads, [&](std::size_t i) { rows[i] = coefficients(*c.barrier, ks[i], c.m); });
    out << "k,E,ReT,ImT,ReR,ImR,w,ReA,ImA,absT2\n";
    for (const auto& s : rows) {
        out << num(s.k) << ',' << num(energy(s.k, c.m)) << ',' << num(s.T.real()) << ',' << num(s.T.imag()) << ','
            << num(s.R.real()) << ',' << num(s.R.imag()) << ',' << num(s.w) << ',' << num(s.A.real()) << ','
            << num(s.A.imag()) << ',' << num(std::norm(s.T)) << '\n';
    }
}

void write_distribution_stats(std::ostream& out, const ArrivalDistribution& dist) {
    for (const auto& w : dist.warnings) out << "# warning: " << w << "\n";
    out << "# stat: total_probability=" << num(total_probability(dist).value) << "\n";
    if (total_probability(dist).value > 1e-12) {
        out << "# stat: mean_time=" << num(mean_time(dist)) << "\n";
        out << "# stat: mode_time=" << num(mode_time(dist)) << "\n";
        out << "# stat: peaks=" << peaks(dist).size() << "\n";
    }
}

void run_arrival(const RunConfig& c, std::ostream& out) {
    const WavePacketSpec packet = packet_of(c);
    TimeGrid grid;
    if (c.t_min) {
        grid = {*c.t_min, *c.t_max, c.n_t};
    } else {
        double estimate = 0.0;
        if (c.barrier) {
            try {
                estimate = phase_delay(*c.barrier, packet.k0(), c.m).t_d;
            } catch (const NumericalError&) {
            }
        }
        grid = default_time_grid(packet, *c.L, estimate, c.n_t);
    }
    const ArrivalDistribution dist = arrival_density(packet, c.barrier, c.alpha, *c.L, grid, quadrature_of(c));
    write_distribution_stats(out, dist);
    out << "t,P\n";
    for (std::size_t i = 0; i < dist.density.size(); ++i) {
        out << num(dist.time(i)) << ',' << num(dist.density[i]) << '\n';
    }
}

void run_delay(const RunConfig& c, std::ostream& out) {
    if (c.method == "empirical") {
        EmpiricalDelayOptions options;
        options.quadrature = quadrature_of(c);
        if (c.t_min) options.grid = TimeGrid{*c.t_min, *c.t_max, c.n_t};
        else {
            double estimate = 0.0;
            try {
                estimate = phase_delay(*c.barrier, *c.k0, c.m).t_d;
            } catch (const NumericalError&) {
            }
            options.grid = default_time_grid(packet_of(c), *c.L, estimate, c.n_t);
        }
        const DelayResult r = empirical_delay(packet_of(c), *c.barrier, c.alpha, *c.L, options);
        out << "# flags: single_peak=" << (r.single_peak ? "true" : "false")
            << " narrow_packet=" << (r.narrow_packet ? "true" : "false") << "\n";
        out << "k,t_d\n" << num(r.k) << ',' << num(r.t_d) << '\n';
        return;
    }
    const std::vector<double> ks = c.k ? std::vector<double>{*c.k} : c.k_range->values();
    const auto results = phase_delay_scan(*c.barrier, ks, c.m, c.threads);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (!results[i]) out << "# excluded: k=" << num(ks[i]) << " (transmission zero)\n";
    }
    out << "k,t_d\n";
    for (const auto& r : results) {
        if (r) out << num(r->k) << ',' << num(r->t_d) << '\n';
    }
}

void run_hartmann(const RunConfig& c, std::ostream& out) {
    const auto ds = c.d_list->values();
    const auto points = hartmann_scan(*c.V0, c.m, *c.k, ds, c.threads);
    for (const auto& p : points) {
        if (p.excluded) out << "# excluded: d=" << num(p.d) << " (transmission below 1e-300)\n";
    }
    out << "d,t_d,tau\n";
    for (const auto& p : points) {
        if (!p.excluded) out << num(p.d) << ',' << num(p.t_d) << ',' << num(p.tau) << '\n';
    }
}

void run_causality(const RunConfig& c, std::ostream& out, std::ostream& diag) {
    const CausalityReport rep = causality_report(packet_of(c), *c.barrier, *c.L, c.alpha, quadrature_of(c), c.n_t);
    for (const auto& w : rep.warnings) out << "# warning: " << w << "\n";
    for (const auto& reason : rep.stationary_phase.reasons) out << "# reason: " << reason << "\n";
    const auto flag = [](bool b) { return b ? "true" : "false"; };
    out << "r,v,d,t_d,delay_method,delta_s2,bound_margin,window_lower,window_upper,inside_window,sigma_x,localized,"
           "narrow,stationary_phase_valid,incompatible,leakage,transmission\n";
    out << num(rep.r) << ',' << num(rep.v) << ',' << num(rep.d) << ',' << num(rep.t_d) << ','
        << (rep.delay_method == DelayMethod::phase ? "phase" : "empirical") << ',' << num(rep.delta_s2) << ','
        << num(rep.bound_margin) << ',' << num(rep.window.lower) << ',' << num(rep.window.upper) << ','
        << flag(rep.inside_window) << ',' << num(rep.stationary_phase.sigma_x) << ','
        << flag(rep.stationary_phase.localized) << ',' << flag(rep.stationary_phase.narrow) << ','
        << flag(rep.stationary_phase.valid) << ',' << flag(rep.stationary_phase.incompatible) << ','
        << num(rep.leakage) << ',' << num(rep.transmission) << '\n';
    out << "# verdict: " << rep.verdict() << "\n";
    diag << rep.verdict() << "\n";
}

void run_analogue(const RunConfig& c, std::ostream& out) {
    std::optional<SlabStack> stack;
    std::vector<double> omegas;
    if (c.map_from) {
        const auto& f = *c.map_from;
        stack = map_from_quantum(square(f.V0, f.d), f.m, f.E);
        const DelayComparison cmp = compare_delays(square(f.V0, f.d), f.m, f.E);
        out << "# comparison: omega=" << num(cmp.omega) << " group_delay=" << num(cmp.group_delay)
            << " nonrelativistic_phase_delay=" << num(cmp.nonrelativistic_delay)
            << " free_crossing=" << num(cmp.free_crossing) << "\n";
        out << "# caveat: " << cmp.caveat << "\n";
        omegas = c.omega_range ? c.omega_range->values() : std::vector<double>{cmp.omega};
    } else {
        std::vector<SlabLayer> layers;
        for (const auto& [w, eps] : *c.stack) layers.push_back(permittivity_layer(w, eps));
        stack.emplace(std::move(layers));
        omegas = c.omega_range->values();
        out << "# caveat: " << kGroupDelayCaveat << "\n";
    }
    struct Row {
        Transmission t;
        std::optional<double> delay;
    };
    std::vector<Row> rows(omegas.size());
    parallel_for(omegas.size(), c.threads, [&](std::size_t i) {
        rows[i] = {helmholtz_coefficients(*stack, omegas[i]), group_delay(*stack, omegas[i])};
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].delay) out << "# excluded: omega=" << num(omegas[i]) << " (transmission zero)\n";
    }
    out << "omega,ReT,ImT,group_delay\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].delay) continue;
        out << num(omegas[i]) << ',' << num(rows[i].t.T.real()) << ',' << num(rows[i].t.T.imag()) << ','
            << num(*rows[i].delay) << '\n';
    }
}

} // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& diag) {
    // Render fully before touching the output file so failures leave no partial CSV.
    std::ostringstream body;
    write_meta(body, c);
    if (c.command == "scatter") run_scatter(c, body);
    else if (c.command == "arrival") run_arrival(c, body);
    else if (c.command == "delay") run_delay(c, body);
    else if (c.command == "hartmann") run_hartmann(c, body);
    else if (c.command == "causality") run_causality(c, body, diag);
    else if (c.command == "analogue") run_analogue(c, body);
    else throw ConfigError("command", "unknown subcommand '" + c.command + "'");

    if (c.out.empty() || c.out == "-") {
        out << body.str();
    } else {
        std::ofstream file(c.out, std::ios::binary);
        if (!file) throw ConfigError("out", "cannot open '" + c.out + "' for writing");
        file << body.str();
    }
    return 0;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& diag) {
    if (args.empty() || args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
        (args.empty() ? diag : out) << usage();
        return args.empty() ? 2 : 0;
    }
    try {
        return run(parse(args), out, diag);
    } catch (const InputError& e) {
        diag << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        diag << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        diag << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

} // namespace qtime::cli
