#include "qtime/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qtime/kinematics.hpp"

namespace qtime::cli {

namespace {

using Entries = std::map<std::string, std::string>;

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::set<std::string> shared{"m", "out", "threads", "nk"};
    static const std::map<std::string, std::set<std::string>> table = [] {
        std::map<std::string, std::set<std::string>> t{
            {"scatter", {"barrier", "kmin", "kmax", "count"}},
            {"arrival", {"k0", "sigma-p", "x0", "L", "barrier", "alpha", "tmin", "tmax", "nt"}},
            {"delay", {"barrier", "k", "kmin", "kmax", "count", "method", "k0", "sigma-p", "x0", "L", "alpha", "tmin",
                       "tmax", "nt"}},
            {"hartmann", {"V0", "k", "d-list"}},
            {"causality", {"k0", "sigma-p", "x0", "L", "barrier", "alpha", "nt"}},
            {"analogue", {"stack", "map-from", "omega-min", "omega-max", "count"}},
        };
        for (auto& [name, keys] : t) keys.insert(shared.begin(), shared.end());
        return t;
    }();
    return table;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double to_double(const std::string& key, const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw ConfigError(key, "malformed number '" + text + "'");
    }
    return value;
}

std::size_t to_size(const std::string& key, const std::string& text) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
    }
    return value;
}

std::vector<double> number_list(const std::string& key, const std::string& text, char sep, std::size_t count) {
    const auto parts = split(text, sep);
    if (parts.size() != count) {
        throw ConfigError(key, "expected " + std::to_string(count) + " values in '" + text + "'");
    }
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(to_double(key, p));
    return out;
}

std::string shortest(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::vector<std::pair<double, double>> parse_pairs(const std::string& key, const std::string& body) {
    std::vector<std::pair<double, double>> out;
    for (const auto& seg : split(body, ';')) {
        const auto v = number_list(key, seg, ',', 2);
        out.emplace_back(v[0], v[1]);
    }
    return out;
}

Entries read_entries(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) lines.push_back(line);
    }
    const std::string meta = "# meta: ";
    const bool has_meta =
        std::any_of(lines.begin(), lines.end(), [&](const std::string& l) { return l.rfind(meta, 0) == 0; });
    Entries out;
    for (const auto& raw : lines) {
        std::string line;
        if (has_meta) {
            if (raw.rfind(meta, 0) != 0) continue;
            line = trim(raw.substr(meta.size()));
        } else {
            line = trim(raw);
            if (line.empty() || line[0] == '#') continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config", "expected key=value, got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key == "tool" || key == "version") continue;
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::optional<Range> range_from(const Entries& e, const std::string& lo, const std::string& hi) {
    const bool any = e.count(lo) || e.count(hi) || e.count("count");
    if (!any) return std::nullopt;
    if (!e.count(lo) || !e.count(hi)) {
        throw ConfigError(e.count(lo) ? hi : lo, "range needs --" + lo + ", --" + hi + " and --count");
    }
    Range r{to_double(lo, e.at(lo)), to_double(hi, e.at(hi)), e.count("count") ? to_size("count", e.at("count")) : 0};
    if (r.count == 0) throw ConfigError("count", "must be at least 1");
    if (r.count > 1 && !(r.stop > r.start)) throw ConfigError(hi, "must exceed --" + lo);
    return r;
}

void require(const std::optional<double>& v, const std::string& key, const std::string& command) {
    if (!v) throw ConfigError(key, "required for '" + command + "'");
}

void validate_positive(const std::optional<double>& v, const std::string& key) {
    if (v && !(*v > 0.0)) throw ConfigError(key, "must be positive");
}

void validate_barrier_mass(const RunConfig& c) {
    if (c.barrier && c.barrier->max_height() >= c.m) {
        throw ConfigError("barrier", "height " + shortest(c.barrier->max_height()) + " >= m = " + shortest(c.m) +
                                         ": background-field approximation fails");
    }
}

void validate_packet(const RunConfig& c) {
    for (const auto& [v, key] : {std::pair{c.k0, "k0"}, {c.sigma_p, "sigma-p"}, {c.x0, "x0"}, {c.L, "L"}}) {
        require(v, key, c.command);
    }
    validate_positive(c.k0, "k0");
    validate_positive(c.sigma_p, "sigma-p");
    validate_positive(c.x0, "x0");
    if (*c.k0 < 5.0 * *c.sigma_p) throw ConfigError("sigma-p", "must satisfy k0 >= 5 sigma-p");
    if (c.barrier && !(*c.L > 0.5 * c.barrier->total_width())) {
        throw ConfigError("L", "detector must sit outside the barrier (L > d/2)");
    }
    if (c.t_min.has_value() != c.t_max.has_value()) {
        throw ConfigError(c.t_min ? "tmax" : "tmin", "--tmin and --tmax must be given together");
    }
    if (c.t_min && !(*c.t_max > *c.t_min)) throw ConfigError("tmax", "must exceed --tmin");
    if (c.n_t < 3) throw ConfigError("nt", "must be at least 3");
}

RunConfig build(const Entries& e) {
    RunConfig c;
    if (!e.count("command")) throw ConfigError("command", "missing subcommand");
    c.command = e.at("command");
    const auto table = allowed_keys().find(c.command);
    if (table == allowed_keys().end()) throw ConfigError("command", "unknown subcommand '" + c.command + "'");
    for (const auto& [key, value] : e) {
        if (key != "command" && !table->second.count(key)) {
            throw ConfigError(key, "unknown option for '" + c.command + "'");
        }
    }
    const auto num = [&](const std::string& key) -> std::optional<double> {
        if (!e.count(key)) return std::nullopt;
        return to_double(key, e.at(key));
    };

    if (e.count("m")) c.m = to_double("m", e.at("m"));
    if (!(c.m > 0.0)) throw ConfigError("m", "must be positive");
    c.k0 = num("k0");
    c.sigma_p = num("sigma-p");
    c.x0 = num("x0");
    c.L = num("L");
    if (e.count("barrier") && e.at("barrier") != "none") {
        try {
            c.barrier = parse_barrier(e.at("barrier"));
        } catch (const ConfigError&) {
            throw;
        } catch (const InputError& err) {
            throw ConfigError("barrier", err.what());
        }
    }
    if (e.count("alpha")) {
        try {
            c.alpha = parse_detector(e.at("alpha"));
        } catch (const ConfigError&) {
            throw;
        } catch (const InputError& err) {
            throw ConfigError("alpha", err.what());
        }
    }
    c.t_min = num("tmin");
    c.t_max = num("tmax");
    if (e.count("nt")) c.n_t = to_size("nt", e.at("nt"));
    if (e.count("nk")) c.n_k = to_size("nk", e.at("nk"));
    if (c.n_k < 2) throw ConfigError("nk", "must be at least 2");
    c.k = num("k");
    validate_positive(c.k, "k");
    if (e.count("method")) c.method = e.at("method");
    c.V0 = num("V0");
    if (e.count("d-list")) {
        const auto parts = split(e.at("d-list"), ':');
        if (parts.size() != 3) throw ConfigError("d-list", "expected start:stop:count");
        Range r{to_double("d-list", parts[0]), to_double("d-list", parts[1]), to_size("d-list", parts[2])};
        if (r.count == 0 || !(r.start > 0.0) || (r.count > 1 && !(r.stop > r.start))) {
            throw ConfigError("d-list", "needs 0 < start < stop and count >= 1");
        }
        c.d_list = r;
    }
    if (e.count("stack")) {
        const std::string s = e.at("stack");
        if (s.rfind("slab:", 0) == 0) {
            const auto v = number_list("stack", s.substr(5), ',', 2);
            c.stack = std::vector<std::pair<double, double>>{{v[1], v[0]}};
        } else if (s.rfind("pw:", 0) == 0) {
            c.stack = parse_pairs("stack", s.substr(3));
        } else {
            throw ConfigError("stack", "expected slab:eps,X or pw:w1,eps1;w2,eps2;...");
        }
        for (const auto& [w, eps] : *c.stack) {
            if (!(w > 0.0)) throw ConfigError("stack", "layer widths must be positive");
        }
    }
    if (e.count("map-from")) {
        const auto v = number_list("map-from", e.at("map-from"), ',', 4);
        c.map_from = MapFrom{v[0], v[1], v[2], v[3]};
        if (!(v[0] > 0.0) || !(v[1] > 0.0) || !(v[2] > 0.0) || !(v[3] > 0.0)) {
            throw ConfigError("map-from", "V0, d, m and E must be positive");
        }
    }
    if (e.count("out")) c.out = e.at("out");
    if (e.count("threads")) c.threads = static_cast<unsigned>(to_size("threads", e.at("threads")));

    if (c.command == "analogue") {
        c.omega_range = range_from(e, "omega-min", "omega-max");
        if (c.stack.has_value() == c.map_from.has_value()) {
            throw ConfigError("stack", "give exactly one of --stack and --map-from");
        }
        if (c.stack && !c.omega_range) throw ConfigError("omega-min", "required with --stack");
        if (c.omega_range && !(c.omega_range->start > 0.0)) throw ConfigError("omega-min", "must be positive");
    } else if (c.command == "scatter" || c.command == "delay") {
        c.k_range = range_from(e, "kmin", "kmax");
        if (c.k_range && !(c.k_range->start > 0.0)) throw ConfigError("kmin", "must be positive");
    }

    validate_barrier_mass(c);
    if (c.command == "scatter") {
        if (!c.barrier) throw ConfigError("barrier", "required for 'scatter'");
        if (!c.k_range) throw ConfigError("kmin", "required for 'scatter'");
    } else if (c.command == "arrival") {
        validate_packet(c);
    } else if (c.command == "delay") {
        if (!c.barrier) throw ConfigError("barrier", "required for 'delay'");
        if (c.method == "phase") {
            if (c.k.has_value() == c.k_range.has_value()) {
                throw ConfigError("k", "give either --k or --kmin/--kmax/--count");
            }
        } else if (c.method == "empirical") {
            validate_packet(c);
        } else {
            throw ConfigError("method", "expected phase or empirical");
        }
    } else if (c.command == "hartmann") {
        require(c.V0, "V0", c.command);
        require(c.k, "k", c.command);
        if (!(*c.V0 > 0.0) || !(*c.V0 < c.m)) {
            throw ConfigError("V0", "must satisfy 0 < V0 < m: background-field approximation fails for V0 >= m");
        }
        if (!(energy(*c.k, c.m) - *c.V0 < c.m)) throw ConfigError("k", "above the barrier: no tunneling");
        if (!c.d_list) throw ConfigError("d-list", "required for 'hartmann'");
    } else if (c.command == "causality") {
        if (!c.barrier) throw ConfigError("barrier", "required for 'causality'");
        validate_packet(c);
    }
    return c;
}

} // namespace

std::vector<double> Range::values() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = count == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
}

BarrierProfile parse_barrier(const std::string& text) {
    if (text.rfind("square:", 0) == 0) {
        const auto v = number_list("barrier", text.substr(7), ',', 2);
        return square(v[0], v[1]);
    }
    if (text.rfind("pw:", 0) == 0) {
        std::vector<Segment> segments;
        for (const auto& [w, h] : parse_pairs("barrier", text.substr(3))) segments.push_back({w, h});
        return piecewise(std::move(segments));
    }
    throw ConfigError("barrier", "expected square:V0,d or pw:w1,h1;w2,h2;...");
}

std::string format_barrier(const BarrierProfile& profile) {
    const auto segs = profile.segments();
    if (segs.size() == 1 && segs[0].height > 0.0) {
        return "square:" + shortest(segs[0].height) + "," + shortest(segs[0].width);
    }
    std::string out = "pw:";
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (i) out += ";";
        out += shortest(segs[i].width) + "," + shortest(segs[i].height);
    }
    return out;
}

DetectorModel parse_detector(const std::string& text) {
    if (text == "flat") return DetectorModel::flat();
    if (text.rfind("gauss:", 0) == 0) {
        const auto v = number_list("alpha", text.substr(6), ',', 2);
        return DetectorModel::gaussian_window(v[0], v[1]);
    }
    throw ConfigError("alpha", "expected flat or gauss:kc,w");
}

std::string format_detector(const DetectorModel& detector) {
    if (detector.kind() == DetectorModel::Kind::gaussian_window) {
        return "gauss:" + shortest(detector.center()) + "," + shortest(detector.width());
    }
    return "flat";
}

std::string format_number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
    return std::string(buf, ptr);
}

RunConfig parse_config_text(const std::string& text) {
    return build(read_entries(text));
}

RunConfig parse(const std::vector<std::string>& args) {
    Entries flags;
    std::size_t i = 0;
    if (!args.empty() && args[0].rfind("--", 0) != 0) {
        flags["command"] = args[0];
        i = 1;
    }
    for (; i < args.size(); ++i) {
        const std::string& tok = args[i];
        if (tok.rfind("--", 0) != 0 || tok.size() == 2) {
            throw ConfigError(tok, "unexpected argument");
        }
        std::string key = tok.substr(2);
        std::string value;
        if (const auto eq = key.find('='); eq != std::string::npos) {
            value = key.substr(eq + 1);
            key = key.substr(0, eq);
        } else {
            if (i + 1 >= args.size()) throw ConfigError(key, "missing value");
            value = args[++i];
        }
        if (flags.count(key)) throw ConfigError(key, "given more than once");
        flags[key] = value;
    }
    Entries merged;
    if (const auto it = flags.find("config"); it != flags.end()) {
        merged = read_entries(read_file(it->second));
        flags.erase(it);
    }
    for (const auto& [key, value] : flags) merged[key] = value;
    return build(merged);
}

std::string emit(const RunConfig& c) {
    const auto& keys = allowed_keys().at(c.command);
    std::ostringstream out;
    const auto line = [&](const std::string& key, const std::string& value) {
        if (keys.count(key)) out << key << "=" << value << "\n";
    };
    const auto opt = [&](const std::string& key, const std::optional<double>& v) {
        if (v) line(key, shortest(*v));
    };
    out << "command=" << c.command << "\n";
    line("m", shortest(c.m));
    opt("k0", c.k0);
    opt("sigma-p", c.sigma_p);
    opt("x0", c.x0);
    opt("L", c.L);
    if (c.barrier) line("barrier", format_barrier(*c.barrier));
    line("alpha", format_detector(c.alpha));
    opt("tmin", c.t_min);
    opt("tmax", c.t_max);
    line("nt", std::to_string(c.n_t));
    line("nk", std::to_string(c.n_k));
    opt("k", c.k);
    if (c.k_range) {
        line("kmin", shortest(c.k_range->start));
        line("kmax", shortest(c.k_range->stop));
        line("count", std::to_string(c.k_range->count));
    }
    if (c.command == "delay") line("method", c.method);
    opt("V0", c.V0);
    if (c.d_list) {
        line("d-list", shortest(c.d_list->start) + ":" + shortest(c.d_list->stop) + ":" +
                           std::to_string(c.d_list->count));
    }
    if (c.stack) {
        std::string s = "pw:";
        for (std::size_t i = 0; i < c.stack->size(); ++i) {
            if (i) s += ";";
            s += shortest((*c.stack)[i].first) + "," + shortest((*c.stack)[i].second);
        }
        line("stack", s);
    }
    if (c.map_from) {
        const auto& f = *c.map_from;
        line("map-from", shortest(f.V0) + "," + shortest(f.d) + "," + shortest(f.m) + "," + shortest(f.E));
    }
    if (c.omega_range) {
        line("omega-min", shortest(c.omega_range->start));
        line("omega-max", shortest(c.omega_range->stop));
        line("count", std::to_string(c.omega_range->count));
    }
    if (!c.out.empty()) line("out", c.out);
    line("threads", std::to_string(c.threads));
    return out.str();
}

std::string usage() {
    return "usage: qtime <scatter|arrival|delay|hartmann|causality|analogue> [--key value ...] [--config file]\n"
           "  shared:    --m --out --threads --nk --config\n"
           "  scatter:   --barrier square:V0,d|pw:w1,h1;... --kmin --kmax --count\n"
           "  arrival:   --k0 --sigma-p --x0 --L [--barrier ...|none] [--alpha flat|gauss:kc,w] [--tmin --tmax] [--nt]\n"
           "  delay:     --barrier ... (--k | --kmin --kmax --count) [--method phase|empirical + packet flags]\n"
           "  hartmann:  --V0 --k --d-list start:stop:count\n"
           "  causality: --k0 --sigma-p --x0 --L --barrier ... [--alpha] [--nt]\n"
           "  analogue:  (--stack slab:eps,X|pw:w1,eps1;... --omega-min --omega-max --count) | --map-from V0,d,m,E\n";
}

} // namespace qtime::cli
