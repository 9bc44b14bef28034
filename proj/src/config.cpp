#include "synthlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace synthlab {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        parts.push_back(trim(item));
    return parts;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct RawEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

using RawMap = std::map<std::string, RawEntry>;

class Reader {
  public:
    Reader(RawMap& raw, std::vector<std::string>& errors) : raw_(raw), errors_(errors) {}

    bool has(const std::string& key) const { return raw_.count(key) > 0; }

    std::optional<std::string> str(const std::string& key) {
        auto it = raw_.find(key);
        if (it == raw_.end())
            return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    std::optional<double> num(const std::string& key) {
        auto v = str(key);
        if (!v)
            return std::nullopt;
        try {
            std::size_t pos = 0;
            double d = std::stod(*v, &pos);
            if (pos != v->size())
                throw std::invalid_argument("trailing characters");
            return d;
        } catch (const std::exception&) {
            fail(key, "is not a number: '" + *v + "'");
            return std::nullopt;
        }
    }

    std::optional<long long> integer(const std::string& key) {
        auto d = num(key);
        if (!d)
            return std::nullopt;
        if (*d != std::floor(*d)) {
            fail(key, "must be an integer");
            return std::nullopt;
        }
        return static_cast<long long>(*d);
    }

    void fail(const std::string& key, const std::string& msg) {
        auto it = raw_.find(key);
        std::string where = it != raw_.end() ? " (line " + std::to_string(it->second.line) + ")" : "";
        errors_.push_back(key + " " + msg + where);
    }

    void fail_missing(const std::string& key) { errors_.push_back("missing required key " + key); }

    void flag_unused() {
        for (const auto& [key, entry] : raw_)
            if (!entry.used)
                errors_.push_back("unknown key " + key + " (line " + std::to_string(entry.line) + ")");
    }

  private:
    RawMap& raw_;
    std::vector<std::string>& errors_;
};

} // namespace

const char* command_name(Command c) {
    switch (c) {
    case Command::Spectrum: return "spectrum";
    case Command::Profile: return "profile";
    case Command::Fr: return "fr";
    case Command::Approx: return "approx";
    case Command::Stability: return "stability";
    case Command::Endpoint: return "endpoint";
    case Command::Uncertainty: return "uncertainty";
    case Command::Kuznecov: return "kuznecov";
    case Command::Volume: return "volume";
    }
    return "?";
}

std::optional<Command> command_from_name(const std::string& name) {
    static const std::map<std::string, Command> table = {
        {"spectrum", Command::Spectrum}, {"profile", Command::Profile},
        {"fr", Command::Fr},             {"approx", Command::Approx},
        {"stability", Command::Stability}, {"endpoint", Command::Endpoint},
        {"uncertainty", Command::Uncertainty}, {"kuznecov", Command::Kuznecov},
        {"volume", Command::Volume}};
    auto it = table.find(name);
    if (it == table.end())
        return std::nullopt;
    return it->second;
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
    return command == o.command && seed == o.seed && manifold == o.manifold &&
           lambda_max == o.lambda_max && has_measure == o.has_measure &&
           (!has_measure || measure == o.measure) && p == o.p && r_grid == o.r_grid &&
           k_terms == o.k_terms && trials == o.trials && delta_min == o.delta_min &&
           delta_max == o.delta_max && delta_count == o.delta_count &&
           eta_target == o.eta_target && n_samples == o.n_samples &&
           support_points == o.support_points && quad_nodes == o.quad_nodes &&
           out_dir == o.out_dir && basename == o.basename;
}

std::vector<double> ExperimentConfig::delta_grid() const {
    std::vector<double> grid;
    if (delta_count == 1) {
        grid.push_back(delta_min);
        return grid;
    }
    double lmin = std::log(delta_min), lmax = std::log(delta_max);
    for (int i = 0; i < delta_count; ++i)
        grid.push_back(std::exp(lmin + (lmax - lmin) * i / (delta_count - 1.0)));
    return grid;
}

std::string ExperimentConfig::canonical_text() const {
    std::ostringstream out;
    out << "[experiment]\n";
    out << "command = " << command_name(command) << "\n";
    out << "seed = " << seed << "\n";
    out << "[manifold]\n";
    out << "model = " << manifold.name() << "\n";
    out << "lambda_max = " << fmt_double(lambda_max) << "\n";
    if (has_measure) {
        out << "[measure]\n";
        out << "preset = " << measure_kind_name(measure.kind) << "\n";
        switch (measure.kind) {
        case MeasureKind::Subtorus: out << "subtorus_k = " << measure.subtorus_k << "\n"; break;
        case MeasureKind::Segment:
            out << "seg_a = " << fmt_double(measure.segment_a[0]) << ","
                << fmt_double(measure.segment_a[1]) << "," << fmt_double(measure.segment_a[2])
                << "\n";
            out << "seg_b = " << fmt_double(measure.segment_b[0]) << ","
                << fmt_double(measure.segment_b[1]) << "," << fmt_double(measure.segment_b[2])
                << "\n";
            break;
        case MeasureKind::MomentCurve:
            out << "t_end = " << fmt_double(measure.curve_t_end) << "\n";
            break;
        case MeasureKind::AtomSet: {
            out << "atoms = ";
            for (std::size_t i = 0; i < measure.atoms.size(); ++i) {
                const auto& [pt, w] = measure.atoms[i];
                if (i)
                    out << "; ";
                out << fmt_double(pt[0]) << "," << fmt_double(pt[1]) << "," << fmt_double(pt[2])
                    << "," << fmt_double(w);
            }
            out << "\n";
            break;
        }
        case MeasureKind::ProductCantor:
            out << "cantor_level = " << measure.cantor_level << "\n";
            out << "cantor_mass = " << fmt_double(measure.cantor_mass) << "\n";
            break;
        case MeasureKind::Equator: break;
        case MeasureKind::Latitude: out << "theta0 = " << fmt_double(measure.theta0) << "\n"; break;
        }
        if (!measure.density.is_uniform() || measure.density.a0 != 1.0) {
            out << "density_a0 = " << fmt_double(measure.density.a0) << "\n";
            out << "density_a1 = " << fmt_double(measure.density.a1) << "\n";
            out << "density_freq = " << measure.density.freq << "\n";
        }
    }
    out << "[params]\n";
    out << "p = " << fmt_double(p) << "\n";
    if (!r_grid.empty()) {
        out << "r_grid = ";
        for (std::size_t i = 0; i < r_grid.size(); ++i)
            out << (i ? "," : "") << fmt_double(r_grid[i]);
        out << "\n";
    }
    out << "k_terms = " << k_terms << "\n";
    out << "trials = " << trials << "\n";
    out << "delta_min = " << fmt_double(delta_min) << "\n";
    out << "delta_max = " << fmt_double(delta_max) << "\n";
    out << "delta_count = " << delta_count << "\n";
    out << "eta_target = " << fmt_double(eta_target) << "\n";
    out << "n_samples = " << n_samples << "\n";
    out << "support_points = " << support_points << "\n";
    out << "quad_nodes = " << quad_nodes << "\n";
    out << "[output]\n";
    out << "dir = " << out_dir << "\n";
    out << "basename = " << basename << "\n";
    return out.str();
}

ParseOutcome parse_config(const std::string& text) {
    ParseOutcome out;
    RawMap raw;
    std::string section;
    int line_no = 0;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                out.errors.push_back("malformed section header (line " + std::to_string(line_no) +
                                     ")");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            out.errors.push_back("expected key = value (line " + std::to_string(line_no) + ")");
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        std::string full = section.empty() ? key : section + "." + key;
        if (raw.count(full))
            out.errors.push_back("duplicate key " + full + " (line " + std::to_string(line_no) +
                                 ")");
        raw[full] = RawEntry{value, line_no, false};
    }

    Reader rd(raw, out.errors);
    ExperimentConfig cfg;

    // [experiment]
    if (auto cmd = rd.str("experiment.command")) {
        auto c = command_from_name(*cmd);
        if (!c)
            rd.fail("experiment.command", "names no known command: '" + *cmd + "'");
        else
            cfg.command = *c;
    } else {
        rd.fail_missing("experiment.command");
    }
    if (auto s = rd.integer("experiment.seed")) {
        if (*s < 0)
            rd.fail("experiment.seed", "must be nonnegative");
        else
            cfg.seed = static_cast<std::uint64_t>(*s);
    }
    if (auto t = rd.integer("experiment.threads")) {
        if (*t < 1 || *t > 256)
            rd.fail("experiment.threads", "must lie in [1, 256]");
        else
            cfg.threads = static_cast<int>(*t);
    }

    // [manifold]
    if (auto m = rd.str("manifold.model")) {
        if (*m == "torus1")
            cfg.manifold = Manifold::torus(1);
        else if (*m == "torus2")
            cfg.manifold = Manifold::torus(2);
        else if (*m == "torus3")
            cfg.manifold = Manifold::torus(3);
        else if (*m == "sphere2")
            cfg.manifold = Manifold::sphere2();
        else
            rd.fail("manifold.model", "must be torus1|torus2|torus3|sphere2, got '" + *m + "'");
    } else {
        rd.fail_missing("manifold.model");
    }
    if (auto lm = rd.num("manifold.lambda_max")) {
        if (*lm < 0.0)
            rd.fail("manifold.lambda_max", "must be nonnegative");
        else
            cfg.lambda_max = *lm;
    } else {
        rd.fail_missing("manifold.lambda_max");
    }

    // [measure]
    if (auto preset = rd.str("measure.preset")) {
        cfg.has_measure = true;
        cfg.measure.manifold = cfg.manifold;
        std::string v = *preset;
        if (v == "subtorus")
            cfg.measure.kind = MeasureKind::Subtorus;
        else if (v == "segment")
            cfg.measure.kind = MeasureKind::Segment;
        else if (v == "moment_curve")
            cfg.measure.kind = MeasureKind::MomentCurve;
        else if (v == "atoms")
            cfg.measure.kind = MeasureKind::AtomSet;
        else if (v == "product_cantor")
            cfg.measure.kind = MeasureKind::ProductCantor;
        else if (v == "equator")
            cfg.measure.kind = MeasureKind::Equator;
        else if (v == "latitude")
            cfg.measure.kind = MeasureKind::Latitude;
        else
            rd.fail("measure.preset", "names no known preset: '" + v + "'");
    }
    if (auto k = rd.integer("measure.subtorus_k"))
        cfg.measure.subtorus_k = static_cast<int>(*k);
    auto parse_point = [&](const std::string& key, Point& dst) {
        if (auto v = rd.str(key)) {
            auto parts = split(*v, ',');
            if (parts.size() < 1 || parts.size() > 3) {
                rd.fail(key, "wants 1-3 comma-separated coordinates");
                return;
            }
            for (std::size_t i = 0; i < parts.size(); ++i) {
                try {
                    dst[i] = std::stod(parts[i]);
                } catch (const std::exception&) {
                    rd.fail(key, "has a non-numeric coordinate '" + parts[i] + "'");
                }
            }
        }
    };
    parse_point("measure.seg_a", cfg.measure.segment_a);
    parse_point("measure.seg_b", cfg.measure.segment_b);
    if (auto t = rd.num("measure.t_end"))
        cfg.measure.curve_t_end = *t;
    if (auto v = rd.str("measure.atoms")) {
        for (const auto& atom_str : split(*v, ';')) {
            if (atom_str.empty())
                continue;
            auto parts = split(atom_str, ',');
            if (parts.size() != 4) {
                rd.fail("measure.atoms", "wants 'x,y,z,w' per atom, got '" + atom_str + "'");
                continue;
            }
            try {
                Point pt{std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
                cfg.measure.atoms.emplace_back(pt, std::stod(parts[3]));
            } catch (const std::exception&) {
                rd.fail("measure.atoms", "has a non-numeric entry in '" + atom_str + "'");
            }
        }
    }
    if (auto l = rd.integer("measure.cantor_level"))
        cfg.measure.cantor_level = static_cast<int>(*l);
    if (auto m = rd.num("measure.cantor_mass"))
        cfg.measure.cantor_mass = *m;
    if (auto t = rd.num("measure.theta0"))
        cfg.measure.theta0 = *t;
    if (auto a = rd.num("measure.density_a0"))
        cfg.measure.density.a0 = *a;
    if (auto a = rd.num("measure.density_a1"))
        cfg.measure.density.a1 = *a;
    if (auto f = rd.integer("measure.density_freq")) {
        if (*f < 0)
            rd.fail("measure.density_freq", "must be nonnegative");
        else
            cfg.measure.density.freq = static_cast<int>(*f);
    }

    // [params]
    if (auto p = rd.num("params.p"))
        cfg.p = *p;
    if (auto v = rd.str("params.r_grid")) {
        for (const auto& part : split(*v, ',')) {
            try {
                cfg.r_grid.push_back(std::stod(part));
            } catch (const std::exception&) {
                rd.fail("params.r_grid", "has a non-numeric entry '" + part + "'");
            }
        }
    }
    if (auto k = rd.integer("params.k_terms"))
        cfg.k_terms = static_cast<int>(*k);
    if (auto t = rd.integer("params.trials"))
        cfg.trials = static_cast<int>(*t);
    if (auto d = rd.num("params.delta_min"))
        cfg.delta_min = *d;
    if (auto d = rd.num("params.delta_max"))
        cfg.delta_max = *d;
    if (auto d = rd.integer("params.delta_count"))
        cfg.delta_count = static_cast<int>(*d);
    if (auto e = rd.num("params.eta_target"))
        cfg.eta_target = *e;
    if (auto n = rd.integer("params.n_samples"))
        cfg.n_samples = *n;
    if (auto s = rd.integer("params.support_points"))
        cfg.support_points = static_cast<std::size_t>(std::max(0LL, *s));
    if (auto q = rd.integer("params.quad_nodes"))
        cfg.quad_nodes = static_cast<std::size_t>(std::max(0LL, *q));

    // [output]
    if (auto d = rd.str("output.dir"))
        cfg.out_dir = *d;
    if (auto b = rd.str("output.basename"))
        cfg.basename = *b;

    rd.flag_unused();

    // Cross-field validation, command by command.
    auto needs_measure = [&](Command c) {
        return c != Command::Spectrum;
    };
    if (needs_measure(cfg.command) && !cfg.has_measure)
        out.errors.push_back("missing required key measure.preset for command " +
                             std::string(command_name(cfg.command)));
    if (cfg.has_measure) {
        if (cfg.measure.kind == MeasureKind::Subtorus &&
            cfg.measure.subtorus_k >= cfg.manifold.dim())
            out.errors.push_back("measure.subtorus_k: support not thin (k = " +
                                 std::to_string(cfg.measure.subtorus_k) +
                                 " >= d = " + std::to_string(cfg.manifold.dim()) + ")");
        if ((cfg.measure.kind == MeasureKind::Equator ||
             cfg.measure.kind == MeasureKind::Latitude) &&
            !cfg.manifold.is_sphere())
            out.errors.push_back("measure.preset: " + std::string(measure_kind_name(cfg.measure.kind)) +
                                 " needs manifold.model = sphere2");
        if ((cfg.measure.kind == MeasureKind::Subtorus || cfg.measure.kind == MeasureKind::Segment ||
             cfg.measure.kind == MeasureKind::MomentCurve ||
             cfg.measure.kind == MeasureKind::ProductCantor) &&
            !cfg.manifold.is_torus())
            out.errors.push_back("measure.preset: " + std::string(measure_kind_name(cfg.measure.kind)) +
                                 " needs a torus model");
        if (cfg.measure.kind == MeasureKind::Latitude &&
            (cfg.measure.theta0 <= 0.0 || cfg.measure.theta0 >= kPi))
            out.errors.push_back("measure.theta0 must lie strictly inside (0, pi)");
    }
    if (cfg.command == Command::Stability) {
        if (cfg.p <= 2.0)
            out.errors.push_back("params.p must exceed 2 for stability (got " + fmt_double(cfg.p) +
                                 ")");
        if (cfg.r_grid.empty())
            out.errors.push_back("missing required key params.r_grid for command stability");
    }
    if (cfg.command == Command::Endpoint || cfg.command == Command::Uncertainty ||
        cfg.command == Command::Fr) {
        if (cfg.r_grid.empty())
            out.errors.push_back("missing required key params.r_grid for command " +
                                 std::string(command_name(cfg.command)));
    }
    for (double r : cfg.r_grid)
        if (r < 1.0)
            out.errors.push_back("params.r_grid entries must be >= 1");
    if (cfg.command == Command::Approx) {
        if (cfg.k_terms < 1)
            out.errors.push_back("params.k_terms must be >= 1");
        if (cfg.trials < 1)
            out.errors.push_back("params.trials must be >= 1");
    }
    if (cfg.command == Command::Volume) {
        if (cfg.delta_min <= 0.0 || cfg.delta_max < cfg.delta_min)
            out.errors.push_back("params.delta_min/delta_max must satisfy 0 < min <= max");
        if (cfg.delta_max >= kPi)
            out.errors.push_back("params.delta_max must stay below pi");
        if (cfg.delta_count < 2)
            out.errors.push_back("params.delta_count must be >= 2");
        if (cfg.n_samples < 10000)
            out.errors.push_back("params.n_samples must be at least 10^4");
    }
    if (cfg.command == Command::Uncertainty && (cfg.eta_target < 0.0 || cfg.eta_target >= 1.0))
        out.errors.push_back("params.eta_target must lie in [0, 1)");
    if (cfg.command == Command::Kuznecov && !cfg.manifold.is_sphere())
        out.errors.push_back("kuznecov runs on the sphere model only");

    if (out.errors.empty())
        out.config = std::move(cfg);
    return out;
}

} // namespace synthlab
