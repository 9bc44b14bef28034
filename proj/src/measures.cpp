#include "synthlab/measures.hpp"

#include "synthlab/accum.hpp"
#include "synthlab/errors.hpp"
#include "synthlab/kernels.hpp"
#include "synthlab/parallel.hpp"
#include "synthlab/quadrature.hpp"
#include "synthlab/rng.hpp"
#include "synthlab/sphere.hpp"
#include "synthlab/torus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace synthlab {

namespace {

const double kCantorDimPerAxis = std::log(2.0) / std::log(3.0);

double seg_length(const MeasureSpec& s) {
    double d2 = 0.0;
    for (int c = 0; c < s.manifold.dim(); ++c) {
        double dx = s.segment_b[static_cast<std::size_t>(c)] -
                    s.segment_a[static_cast<std::size_t>(c)];
        d2 += dx * dx;
    }
    return std::sqrt(d2);
}

// Middle-thirds interval centers in [0, 1) at the given level.
std::vector<double> cantor_centers(int level) {
    std::vector<double> lefts{0.0};
    double len = 1.0;
    for (int i = 0; i < level; ++i) {
        len /= 3.0;
        std::vector<double> next;
        next.reserve(lefts.size() * 2);
        for (double x : lefts) {
            next.push_back(x);
            next.push_back(x + 2.0 * len);
        }
        lefts = std::move(next);
    }
    for (double& x : lefts)
        x += len / 2.0;
    return lefts;
}

std::vector<std::pair<Point, double>> cantor_atoms(const MeasureSpec& s) {
    auto centers = cantor_centers(s.cantor_level);
    int d = s.manifold.dim();
    std::size_t per_axis = centers.size();
    std::size_t total = 1;
    for (int c = 0; c < d; ++c)
        total *= per_axis;
    double w = s.cantor_mass / static_cast<double>(total);
    std::vector<std::pair<Point, double>> atoms;
    atoms.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        Point p{0.0, 0.0, 0.0};
        for (int c = d - 1; c >= 0; --c) {
            p[static_cast<std::size_t>(c)] = kTwoPi * centers[rest % per_axis];
            rest /= per_axis;
        }
        atoms.emplace_back(p, w);
    }
    return atoms;
}

} // namespace

const char* measure_kind_name(MeasureKind k) {
    switch (k) {
    case MeasureKind::Subtorus: return "subtorus";
    case MeasureKind::Segment: return "segment";
    case MeasureKind::MomentCurve: return "moment_curve";
    case MeasureKind::AtomSet: return "atoms";
    case MeasureKind::ProductCantor: return "product_cantor";
    case MeasureKind::Equator: return "equator";
    case MeasureKind::Latitude: return "latitude";
    }
    return "?";
}

ThinMeasure::ThinMeasure(MeasureSpec spec) : spec_(std::move(spec)) {
    const auto& s = spec_;
    int d = s.manifold.dim();
    auto require = [](bool ok, const std::string& msg) {
        if (!ok)
            throw ArgumentError("make_measure: " + msg);
    };
    switch (s.kind) {
    case MeasureKind::Subtorus:
        require(s.manifold.is_torus(), "subtorus preset needs a torus model");
        require(s.subtorus_k >= 1, "subtorus dimension must be >= 1");
        require(s.subtorus_k < d, "support not thin: subtorus k = " + std::to_string(s.subtorus_k) +
                                      " >= d = " + std::to_string(d));
        require(s.density.is_uniform() || s.subtorus_k == 1,
                "densities are supported on one-dimensional presets only");
        break;
    case MeasureKind::Segment:
        require(s.manifold.is_torus(), "segment preset needs a torus model");
        require(d >= 2, "support not thin: a segment fills T^1");
        require(seg_length(s) > 0.0, "segment endpoints coincide");
        break;
    case MeasureKind::MomentCurve:
        require(s.manifold.is_torus(), "moment curve preset needs a torus model");
        require(d >= 2, "support not thin: the moment curve fills T^1");
        require(s.curve_t_end > 0.0, "moment curve needs t_end > 0");
        break;
    case MeasureKind::AtomSet:
        for (const auto& [p, w] : s.atoms) {
            require(std::isfinite(w), "atom weight must be finite");
            if (s.manifold.is_sphere())
                require(p[0] >= 0.0 && p[0] <= kPi, "atom colatitude outside [0, pi]");
        }
        atoms_ = s.atoms;
        break;
    case MeasureKind::ProductCantor: {
        require(s.manifold.is_torus(), "product Cantor preset needs a torus model");
        require(s.cantor_level >= 1 && s.cantor_level <= 12, "cantor level must be in [1, 12]");
        double count = std::pow(2.0, s.cantor_level * d);
        require(count <= 1048576.0, "cantor level too deep for this dimension");
        atoms_ = cantor_atoms(s);
        break;
    }
    case MeasureKind::Equator:
        require(s.manifold.is_sphere(), "equator preset needs the sphere model");
        break;
    case MeasureKind::Latitude:
        require(s.manifold.is_sphere(), "latitude preset needs the sphere model");
        require(s.theta0 > 0.0 && s.theta0 < kPi, "latitude theta0 must lie strictly inside (0, pi)");
        break;
    }
    require(nominal_dim() < static_cast<double>(d), "support not thin: k >= d");
}

ThinMeasure make_measure(const MeasureSpec& spec) { return ThinMeasure(spec); }

double ThinMeasure::nominal_dim() const {
    switch (spec_.kind) {
    case MeasureKind::Subtorus: return spec_.subtorus_k;
    case MeasureKind::Segment:
    case MeasureKind::MomentCurve:
    case MeasureKind::Equator:
    case MeasureKind::Latitude: return 1.0;
    case MeasureKind::AtomSet: return 0.0;
    case MeasureKind::ProductCantor: return spec_.manifold.dim() * kCantorDimPerAxis;
    }
    return 0.0;
}

bool ThinMeasure::is_curve() const {
    switch (spec_.kind) {
    case MeasureKind::Segment:
    case MeasureKind::MomentCurve:
    case MeasureKind::Equator:
    case MeasureKind::Latitude: return true;
    case MeasureKind::Subtorus: return spec_.subtorus_k == 1;
    default: return false;
    }
}

double ThinMeasure::param_end() const {
    switch (spec_.kind) {
    case MeasureKind::Subtorus:
    case MeasureKind::Equator:
    case MeasureKind::Latitude: return kTwoPi;
    case MeasureKind::Segment: return 1.0;
    case MeasureKind::MomentCurve: return spec_.curve_t_end;
    default: throw ArgumentError("param_end: not a curve preset");
    }
}

Point ThinMeasure::curve_point(double t) const {
    switch (spec_.kind) {
    case MeasureKind::Subtorus: return Point{wrap_two_pi(t), 0.0, 0.0};
    case MeasureKind::Segment: {
        Point p{0.0, 0.0, 0.0};
        for (int c = 0; c < spec_.manifold.dim(); ++c)
            p[static_cast<std::size_t>(c)] =
                wrap_two_pi(spec_.segment_a[static_cast<std::size_t>(c)] +
                            t * (spec_.segment_b[static_cast<std::size_t>(c)] -
                                 spec_.segment_a[static_cast<std::size_t>(c)]));
        return p;
    }
    case MeasureKind::MomentCurve: {
        Point p{wrap_two_pi(t), wrap_two_pi(t * t), 0.0};
        if (spec_.manifold.dim() == 3)
            p[2] = wrap_two_pi(t * t * t);
        return p;
    }
    case MeasureKind::Equator: return Point{kPi / 2.0, wrap_two_pi(t), 0.0};
    case MeasureKind::Latitude: return Point{spec_.theta0, wrap_two_pi(t), 0.0};
    default: throw ArgumentError("curve_point: not a curve preset");
    }
}

// Measure weight per unit parameter: d mu = speed(t) * density(t) dt.
double ThinMeasure::curve_speed(double t) const {
    (void)t;
    switch (spec_.kind) {
    case MeasureKind::Subtorus: return 1.0;
    case MeasureKind::Segment: return seg_length(spec_);
    case MeasureKind::MomentCurve: return 1.0; // pushforward of dt, not arclength
    case MeasureKind::Equator: return 1.0;
    case MeasureKind::Latitude: return std::sin(spec_.theta0);
    default: throw ArgumentError("curve_speed: not a curve preset");
    }
}

double ThinMeasure::density_at(double t) const {
    const auto& f = spec_.density;
    if (f.is_uniform())
        return f.a0;
    switch (spec_.kind) {
    case MeasureKind::Subtorus:
    case MeasureKind::Equator:
    case MeasureKind::Latitude: return f.a0 + f.a1 * std::cos(f.freq * t);
    default: return f.a0 + f.a1 * std::cos(kTwoPi * f.freq * t / param_end());
    }
}

double ThinMeasure::total_mass() const {
    // Oscillating density parts integrate to zero over whole periods.
    double a0 = spec_.density.a0;
    switch (spec_.kind) {
    case MeasureKind::Subtorus: {
        double m = a0;
        for (int i = 0; i < spec_.subtorus_k; ++i)
            m *= kTwoPi;
        return m;
    }
    case MeasureKind::Segment: return a0 * seg_length(spec_);
    case MeasureKind::MomentCurve: return a0 * spec_.curve_t_end;
    case MeasureKind::Equator: return a0 * kTwoPi;
    case MeasureKind::Latitude: return a0 * kTwoPi * std::sin(spec_.theta0);
    case MeasureKind::AtomSet:
    case MeasureKind::ProductCantor: {
        NeumaierSum s;
        for (const auto& [p, w] : atoms_)
            s.add(w);
        return s.value();
    }
    }
    return 0.0;
}

bool ThinMeasure::has_closed_form() const {
    switch (spec_.kind) {
    case MeasureKind::Subtorus:
    case MeasureKind::AtomSet:
    case MeasureKind::ProductCantor:
    case MeasureKind::Equator:
    case MeasureKind::Latitude: return true;
    case MeasureKind::Segment: return spec_.density.is_uniform();
    case MeasureKind::MomentCurve: return false;
    }
    return false;
}

std::vector<Point> ThinMeasure::support_points(std::size_t target) const {
    if (spec_.kind == MeasureKind::AtomSet || spec_.kind == MeasureKind::ProductCantor) {
        std::vector<Point> pts;
        pts.reserve(atoms_.size());
        for (const auto& [p, w] : atoms_)
            pts.push_back(p);
        return pts;
    }
    if (spec_.kind == MeasureKind::Subtorus && spec_.subtorus_k >= 2) {
        int k = spec_.subtorus_k;
        std::size_t per_axis = std::max<std::size_t>(
            8, static_cast<std::size_t>(
                   std::ceil(std::pow(static_cast<double>(target), 1.0 / k))));
        std::size_t total = 1;
        for (int i = 0; i < k; ++i)
            total *= per_axis;
        std::vector<Point> pts;
        pts.reserve(total);
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::size_t rest = idx;
            Point p{0.0, 0.0, 0.0};
            for (int c = k - 1; c >= 0; --c) {
                p[static_cast<std::size_t>(c)] =
                    kTwoPi * static_cast<double>(rest % per_axis) / static_cast<double>(per_axis);
                rest /= per_axis;
            }
            pts.push_back(p);
        }
        return pts;
    }
    std::size_t n = std::max<std::size_t>(16, target);
    std::vector<Point> pts;
    pts.reserve(n);
    double end = param_end();
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back(curve_point(end * static_cast<double>(i) / static_cast<double>(n)));
    return pts;
}

Point ThinMeasure::sample_support(std::uint64_t seed, std::uint64_t counter) const {
    if (spec_.kind == MeasureKind::AtomSet || spec_.kind == MeasureKind::ProductCantor) {
        if (atoms_.empty())
            throw ArgumentError("sample_support: empty support");
        double total = 0.0;
        for (const auto& [p, w] : atoms_)
            total += std::abs(w);
        double u = rng::u01(seed, 7, counter) * total;
        double acc = 0.0;
        for (const auto& [p, w] : atoms_) {
            acc += std::abs(w);
            if (u <= acc)
                return p;
        }
        return atoms_.back().first;
    }
    if (spec_.kind == MeasureKind::Subtorus && spec_.subtorus_k >= 2) {
        Point p{0.0, 0.0, 0.0};
        for (int c = 0; c < spec_.subtorus_k; ++c)
            p[static_cast<std::size_t>(c)] =
                kTwoPi * rng::u01(seed, 7, counter * 3 + static_cast<std::uint64_t>(c));
        return p;
    }
    return curve_point(param_end() * rng::u01(seed, 7, counter));
}

namespace {

// ---- closed-form coefficient rules ----

// Integral over one period of (a0 + a1 cos(freq t)) e^{-i q t} dt.
std::complex<double> circle_density_integral(const Density& f, int q) {
    double re = 0.0;
    if (q == 0)
        re = kTwoPi * f.a0;
    if (!f.is_uniform() && std::abs(q) == f.freq)
        re += kPi * f.a1;
    return {re, 0.0};
}

std::complex<double> closed_form_coeff(const ThinMeasure& u, const Manifold& M,
                                       const BasisLabel& lab) {
    const auto& s = u.spec();
    switch (s.kind) {
    case MeasureKind::Subtorus: {
        int d = M.dim(), k = s.subtorus_k;
        int comps[3] = {lab.a, lab.b, lab.c};
        for (int c = 1; c < k; ++c)
            if (comps[c] != 0)
                return {0.0, 0.0};
        double scale = torus::eigenfunction_modulus(d);
        for (int c = 1; c < k; ++c)
            scale *= kTwoPi;
        return scale * circle_density_integral(s.density, comps[0]);
    }
    case MeasureKind::Segment: {
        int d = M.dim();
        double jdotA = 0.0, jdotDir = 0.0;
        int comps[3] = {lab.a, lab.b, lab.c};
        for (int c = 0; c < d; ++c) {
            jdotA += comps[c] * s.segment_a[static_cast<std::size_t>(c)];
            jdotDir += comps[c] * (s.segment_b[static_cast<std::size_t>(c)] -
                                   s.segment_a[static_cast<std::size_t>(c)]);
        }
        // integral of e^{-i j.(a + t(b-a))} dt over [0,1], times arclength
        std::complex<double> e;
        if (jdotDir == 0.0) {
            e = {1.0, 0.0};
        } else {
            std::complex<double> z{0.0, -jdotDir};
            e = (std::exp(z) - 1.0) / z;
        }
        return torus::eigenfunction_modulus(d) * seg_length(s) * s.density.a0 *
               std::polar(1.0, -jdotA) * e;
    }
    case MeasureKind::AtomSet:
    case MeasureKind::ProductCantor: {
        std::complex<double> acc{0.0, 0.0};
        for (const auto& [p, w] : u.atom_list())
            acc += w * std::conj(eval_basis(M, lab, p));
        return acc;
    }
    case MeasureKind::Equator:
    case MeasureKind::Latitude: {
        double theta0 = s.kind == MeasureKind::Equator ? kPi / 2.0 : s.theta0;
        int l = lab.a, m = lab.b;
        int ma = std::abs(m);
        double n = sphere::legendre_normalized(l, ma, std::cos(theta0));
        double sign = (m < 0 && ma % 2 == 1) ? -1.0 : 1.0;
        // conj(Y_l^m) = sign * N_l^{|m|} e^{-im phi}; ds = sin(theta0) d phi
        return std::sin(theta0) * sign * n * circle_density_integral(s.density, m);
    }
    default: throw ArgumentError("closed_form_coeff: preset has no closed form");
    }
}

// ---- quadrature rules ----

struct CurveRule {
    std::vector<double> ts;
    std::vector<double> ws; // measure weight times density
};

bool is_closed_curve(MeasureKind k) {
    return k == MeasureKind::Subtorus || k == MeasureKind::Equator || k == MeasureKind::Latitude;
}

CurveRule curve_rule(const ThinMeasure& u, std::size_t n) {
    CurveRule rule;
    double end = u.param_end();
    if (is_closed_curve(u.kind())) {
        // Uniform rule: spectrally exact for periodic integrands.
        rule.ts.resize(n);
        rule.ws.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double t = end * static_cast<double>(i) / static_cast<double>(n);
            rule.ts[i] = t;
            rule.ws[i] = (end / static_cast<double>(n)) * u.curve_speed(t) * u.density_at(t);
        }
        return rule;
    }
    // Open arcs: composite 16-point Gauss panels.
    static const GaussLegendre gl16 = gauss_legendre(16);
    std::size_t panels = std::max<std::size_t>(1, (n + 15) / 16);
    rule.ts.reserve(panels * 16);
    rule.ws.reserve(panels * 16);
    for (std::size_t pnl = 0; pnl < panels; ++pnl) {
        double t0 = end * static_cast<double>(pnl) / static_cast<double>(panels);
        double t1 = end * static_cast<double>(pnl + 1) / static_cast<double>(panels);
        double half = 0.5 * (t1 - t0), mid = 0.5 * (t0 + t1);
        for (std::size_t q = 0; q < 16; ++q) {
            double t = mid + half * gl16.nodes[q];
            rule.ts.push_back(t);
            rule.ws.push_back(half * gl16.weights[q] * u.curve_speed(t) * u.density_at(t));
        }
    }
    return rule;
}

std::size_t auto_curve_nodes(const ThinMeasure& u, double lambda_max) {
    double geometric_length = kTwoPi;
    switch (u.kind()) {
    case MeasureKind::Latitude: geometric_length = kTwoPi * std::sin(u.spec().theta0); break;
    case MeasureKind::Segment: geometric_length = seg_length(u.spec()); break;
    case MeasureKind::MomentCurve: {
        static const GaussLegendre gl = gauss_legendre(64);
        double end = u.param_end();
        NeumaierSum s;
        for (std::size_t i = 0; i < gl.size(); ++i) {
            double t = 0.5 * end * (gl.nodes[i] + 1.0);
            double sp2 = 1.0 + 4.0 * t * t;
            if (u.manifold().dim() == 3)
                sp2 += 9.0 * t * t * t * t;
            s.add(0.5 * end * gl.weights[i] * std::sqrt(sp2));
        }
        geometric_length = s.value();
        break;
    }
    default: break;
    }
    double n = 8.0 * std::max(1.0, lambda_max) * geometric_length / kTwoPi;
    return std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(n)));
}

void quad_fill_lines(const ThinMeasure& u, const SpectrumTable& table,
                     const std::vector<std::size_t>& line_idx, const CurveRule& rule,
                     CoefficientSet& out) {
    const Manifold& M = table.manifold;
    std::vector<Point> pts(rule.ts.size());
    for (std::size_t i = 0; i < rule.ts.size(); ++i)
        pts[i] = u.curve_point(rule.ts[i]);
    for (std::size_t li : line_idx) {
        const auto& line = table.lines[li];
        for (std::size_t bi = 0; bi < line.basis.size(); ++bi) {
            NeumaierSum re, im;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                auto v = rule.ws[i] * std::conj(eval_basis(M, line.basis[bi], pts[i]));
                re.add(v.real());
                im.add(v.imag());
            }
            out.lines[li][bi] = {re.value(), im.value()};
        }
    }
}

// Separable uniform rule for k >= 2 sub-tori.
void quad_fill_subtorus_tensor(const ThinMeasure& u, const SpectrumTable& table,
                               const std::vector<std::size_t>& line_idx, std::size_t per_axis,
                               CoefficientSet& out) {
    int k = u.spec().subtorus_k;
    int d = table.manifold.dim();
    double w = 1.0;
    for (int c = 0; c < k; ++c)
        w *= kTwoPi / static_cast<double>(per_axis);
    double amp = torus::eigenfunction_modulus(d);
    for (std::size_t li : line_idx) {
        const auto& line = table.lines[li];
        for (std::size_t bi = 0; bi < line.basis.size(); ++bi) {
            const auto& lab = line.basis[bi];
            int comps[3] = {lab.a, lab.b, lab.c};
            std::complex<double> prod{1.0, 0.0};
            for (int c = 0; c < k; ++c) {
                std::complex<double> s{0.0, 0.0};
                for (std::size_t i = 0; i < per_axis; ++i)
                    s += std::polar(1.0, -comps[c] * kTwoPi * static_cast<double>(i) /
                                             static_cast<double>(per_axis));
                prod *= s;
            }
            out.lines[li][bi] = amp * w * prod;
        }
    }
}

std::vector<std::size_t> all_line_indices(const SpectrumTable& table) {
    std::vector<std::size_t> idx(table.lines.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    return idx;
}

double max_coeff_diff(const CoefficientSet& a, const CoefficientSet& b,
                      const std::vector<std::size_t>& line_idx) {
    double m = 0.0;
    for (std::size_t li : line_idx)
        for (std::size_t bi = 0; bi < a.lines[li].size(); ++bi)
            m = std::max(m, std::abs(a.lines[li][bi] - b.lines[li][bi]));
    return m;
}

CoefficientSet quad_project_lines(const ThinMeasure& u, SpectrumTablePtr table,
                                  const std::vector<std::size_t>& line_idx, std::size_t nodes) {
    const auto& tab = *table;
    auto out = CoefficientSet::zeros(table);

    if (u.kind() == MeasureKind::AtomSet || u.kind() == MeasureKind::ProductCantor) {
        // Point masses: the pairing is a finite sum, already exact.
        for (std::size_t li : line_idx) {
            const auto& line = tab.lines[li];
            for (std::size_t bi = 0; bi < line.basis.size(); ++bi)
                out.lines[li][bi] = closed_form_coeff(u, tab.manifold, line.basis[bi]);
        }
        return out;
    }

    if (u.kind() == MeasureKind::Subtorus && u.spec().subtorus_k >= 2) {
        std::size_t min_axis = 2 * static_cast<std::size_t>(std::floor(tab.lambda_max)) + 1;
        std::size_t per_axis = nodes > 0 ? nodes : std::max<std::size_t>(min_axis, 32);
        if (nodes > 0 && per_axis < min_axis)
            throw ResolutionError("subtorus quadrature: band " + std::to_string(tab.lambda_max) +
                                  " needs at least " + std::to_string(min_axis) +
                                  " nodes per axis, got " + std::to_string(nodes));
        quad_fill_subtorus_tensor(u, tab, line_idx, per_axis, out);
        return out;
    }

    if (tab.manifold.is_sphere()) {
        // Latitude circle rule: exact once the node count clears the band plus
        // the density frequency.
        int l_max = 0;
        for (std::size_t li : line_idx)
            l_max = std::max(l_max, static_cast<int>(tab.lines[li].key));
        std::size_t required =
            2 * static_cast<std::size_t>(l_max + std::abs(u.spec().density.freq)) + 1;
        std::size_t n = nodes > 0 ? nodes : std::max<std::size_t>(64, required);
        if (n < required)
            throw ResolutionError("sphere circle quadrature: line l = " + std::to_string(l_max) +
                                  " requires at least " + std::to_string(required) +
                                  " longitude nodes, got " + std::to_string(n));
        quad_fill_lines(u, tab, line_idx, curve_rule(u, n), out);
        return out;
    }

    // Torus curves: doubled until two successive orders agree to 1e-9.
    std::size_t n = nodes > 0 ? nodes : auto_curve_nodes(u, tab.lambda_max);
    quad_fill_lines(u, tab, line_idx, curve_rule(u, n), out);
    if (nodes > 0)
        return out;
    for (int iter = 0; iter < 20; ++iter) {
        n *= 2;
        auto finer = CoefficientSet::zeros(table);
        quad_fill_lines(u, tab, line_idx, curve_rule(u, n), finer);
        double diff = max_coeff_diff(out, finer, line_idx);
        out = std::move(finer);
        if (diff <= 1e-9)
            return out;
    }
    throw ResolutionError("curve quadrature: no convergence to 1e-9 by " + std::to_string(n) +
                          " nodes (quadrature order overflow)");
}

} // namespace

CoefficientSet coefficients(const ThinMeasure& measure, SpectrumTablePtr table) {
    if (measure.manifold() != table->manifold)
        throw ArgumentError("coefficients: measure and table use different manifolds");
    if (!measure.has_closed_form())
        return coefficients_quadrature(measure, std::move(table));
    auto out = CoefficientSet::zeros(table);
    const auto& tab = *out.table;
    for (std::size_t li = 0; li < tab.lines.size(); ++li)
        for (std::size_t bi = 0; bi < tab.lines[li].basis.size(); ++bi)
            out.lines[li][bi] = closed_form_coeff(measure, tab.manifold, tab.lines[li].basis[bi]);
    return out;
}

CoefficientSet coefficients_quadrature(const ThinMeasure& measure, SpectrumTablePtr table,
                                       std::size_t nodes) {
    if (measure.manifold() != table->manifold)
        throw ArgumentError("coefficients: measure and table use different manifolds");
    auto idx = all_line_indices(*table);
    return quad_project_lines(measure, std::move(table), idx, nodes);
}

std::pair<std::vector<std::complex<double>>, double>
project(const ThinMeasure& measure, const SpectrumTablePtr& table, std::size_t line_index) {
    if (measure.manifold() != table->manifold)
        throw ArgumentError("project: measure and table use different manifolds");
    if (line_index >= table->lines.size())
        throw ArgumentError("project: line index outside the table");
    CoefficientSet c;
    if (measure.has_closed_form()) {
        c = CoefficientSet::zeros(table);
        const auto& line = table->lines[line_index];
        for (std::size_t bi = 0; bi < line.basis.size(); ++bi)
            c.lines[line_index][bi] = closed_form_coeff(measure, table->manifold, line.basis[bi]);
    } else {
        c = quad_project_lines(measure, table, {line_index}, 0);
    }
    return {c.lines[line_index], c.line_norm(line_index)};
}

SpectralProfile spectral_profile(const ThinMeasure& measure, SpectrumTablePtr table) {
    auto c = coefficients(measure, std::move(table));
    return profile_of(c, measure.has_closed_form() ? Provenance::ClosedForm
                                                   : Provenance::Quadrature);
}

double SupportCloud::distance(const Point& x) const {
    if (size() == 0)
        throw ArgumentError("support cloud is empty");
    if (manifold.is_torus()) {
        const double* cols[3] = {coords[0].data(), coords[1].data(), coords[2].data()};
        Point w{wrap_two_pi(x[0]), wrap_two_pi(x[1]), wrap_two_pi(x[2])};
        return std::sqrt(kernels::min_sq_dist_torus(w.data(), manifold.dim(), cols, size()));
    }
    auto v = sphere::to_xyz(x);
    double chord2 = kernels::min_sq_dist_euclid3(v.data(), coords[0].data(), coords[1].data(),
                                                 coords[2].data(), size());
    double half = 0.5 * std::sqrt(std::min(4.0, chord2));
    return 2.0 * std::asin(std::min(1.0, half));
}

SupportCloud build_support_cloud(const ThinMeasure& measure, std::size_t target) {
    auto pts = measure.support_points(target);
    if (pts.empty())
        throw ArgumentError("build_support_cloud: empty support");
    SupportCloud cloud;
    cloud.manifold = measure.manifold();
    for (auto& col : cloud.coords)
        col.reserve(pts.size());
    if (cloud.manifold.is_torus()) {
        for (const auto& p : pts) {
            cloud.coords[0].push_back(wrap_two_pi(p[0]));
            cloud.coords[1].push_back(wrap_two_pi(p[1]));
            cloud.coords[2].push_back(wrap_two_pi(p[2]));
        }
    } else {
        for (const auto& p : pts) {
            auto v = sphere::to_xyz(p);
            cloud.coords[0].push_back(v[0]);
            cloud.coords[1].push_back(v[1]);
            cloud.coords[2].push_back(v[2]);
        }
    }
    if (measure.is_curve()) {
        double len = kTwoPi;
        switch (measure.kind()) {
        case MeasureKind::Latitude: len = kTwoPi * std::sin(measure.spec().theta0); break;
        case MeasureKind::Segment: len = seg_length(measure.spec()); break;
        case MeasureKind::MomentCurve: len = 4.0 * measure.param_end(); break; // coarse bound
        default: break;
        }
        cloud.mean_spacing = len / static_cast<double>(pts.size());
    }
    return cloud;
}

namespace {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

FitResult weighted_loglog_fit(const std::vector<double>& x, const std::vector<double>& y,
                              const std::vector<double>& wts) {
    double sw = 0.0, swx = 0.0, swy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += wts[i];
        swx += wts[i] * x[i];
        swy += wts[i] * y[i];
    }
    double xb = swx / sw, yb = swy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += wts[i] * (x[i] - xb) * (x[i] - xb);
        sxy += wts[i] * (x[i] - xb) * (y[i] - yb);
    }
    FitResult f;
    f.slope = sxy / sxx;
    f.intercept = yb - f.slope * xb;
    double chi2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        chi2 += wts[i] * r * r;
    }
    double dof = std::max(1.0, static_cast<double>(x.size()) - 2.0);
    f.slope_stderr = std::sqrt(1.0 / sxx) * std::max(1.0, std::sqrt(chi2 / dof));
    return f;
}

} // namespace

VolumeEstimate minkowski_volume(const ThinMeasure& measure, std::vector<double> deltas,
                                long long n_samples, std::uint64_t seed, int threads,
                                std::size_t support_target) {
    if (deltas.empty())
        throw ArgumentError("minkowski_volume: empty delta grid");
    std::sort(deltas.begin(), deltas.end());
    if (deltas.front() <= 0.0)
        throw ArgumentError("minkowski_volume: deltas must be positive");
    if (deltas.back() >= kPi)
        throw ArgumentError("minkowski_volume: deltas must stay below the injectivity scale pi");
    if (n_samples < 10000)
        throw ArgumentError("minkowski_volume: need at least 10^4 samples");

    const Manifold& M = measure.manifold();
    std::size_t cloud_target = support_target > 0 ? support_target : 4096;
    SupportCloud cloud = build_support_cloud(measure, cloud_target);

    // Kernel-metric thresholds: squared flat distance on tori, squared chord on S^2.
    std::vector<double> thr(deltas.size());
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        double t = M.is_torus() ? deltas[k] : 2.0 * std::sin(0.5 * deltas[k]);
        thr[k] = t * t;
    }

    const double* cols[3] = {cloud.coords[0].data(), cloud.coords[1].data(),
                             cloud.coords[2].data()};
    const std::size_t n_cloud = cloud.size();
    const int d = M.dim();
    const bool torus_model = M.is_torus();

    const long long block = 8192;
    const std::size_t n_blocks = static_cast<std::size_t>((n_samples + block - 1) / block);
    std::vector<std::vector<long long>> block_counts(n_blocks,
                                                     std::vector<long long>(deltas.size(), 0));
    parallel_for_blocks(n_blocks, threads, [&](std::size_t bi) {
        auto& counts = block_counts[bi];
        long long lo = static_cast<long long>(bi) * block;
        long long hi = std::min(n_samples, lo + block);
        for (long long i = lo; i < hi; ++i) {
            double p[3] = {0.0, 0.0, 0.0};
            double d2;
            if (torus_model) {
                for (int c = 0; c < d; ++c)
                    p[c] = kTwoPi * rng::u01(seed, 1, static_cast<std::uint64_t>(3 * i + c));
                d2 = kernels::min_sq_dist_torus(p, d, cols, n_cloud);
            } else {
                double z = 2.0 * rng::u01(seed, 1, static_cast<std::uint64_t>(3 * i)) - 1.0;
                double phi = kTwoPi * rng::u01(seed, 1, static_cast<std::uint64_t>(3 * i + 1));
                double st = std::sqrt(std::max(0.0, 1.0 - z * z));
                p[0] = st * std::cos(phi);
                p[1] = st * std::sin(phi);
                p[2] = z;
                d2 = kernels::min_sq_dist_euclid3(p, cols[0], cols[1], cols[2], n_cloud);
            }
            for (std::size_t k = 0; k < thr.size(); ++k)
                if (d2 <= thr[k])
                    ++counts[k];
        }
    });

    VolumeEstimate est;
    est.deltas = deltas;
    est.n_samples = n_samples;
    est.support_spacing = cloud.mean_spacing;
    est.counts.assign(deltas.size(), 0);
    for (const auto& bc : block_counts)
        for (std::size_t k = 0; k < deltas.size(); ++k)
            est.counts[k] += bc[k];

    double vol = M.volume();
    est.volumes.resize(deltas.size());
    est.stderrs.resize(deltas.size());
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        double phat = static_cast<double>(est.counts[k]) / static_cast<double>(n_samples);
        est.volumes[k] = vol * phat;
        est.stderrs[k] =
            vol * std::sqrt(std::max(phat * (1.0 - phat), 0.0) / static_cast<double>(n_samples));
    }

    std::vector<double> lx, ly, lw;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        if (est.counts[k] == 0 || est.counts[k] == n_samples)
            continue;
        double sigma_log = est.stderrs[k] / est.volumes[k];
        lx.push_back(std::log(deltas[k]));
        ly.push_back(std::log(est.volumes[k]));
        lw.push_back(1.0 / (sigma_log * sigma_log));
    }
    if (lx.size() < 2)
        throw ResolutionError("minkowski_volume: delta grid left fewer than two usable points");
    auto fit = weighted_loglog_fit(lx, ly, lw);
    est.fitted_exponent = fit.slope;
    est.fitted_log_c = fit.intercept;

    est.slope_min = est.slope_max = fit.slope;
    for (std::size_t i = 1; i < lx.size(); ++i) {
        double s = (ly[i] - ly[i - 1]) / (lx[i] - lx[i - 1]);
        est.slope_min = std::min(est.slope_min, s);
        est.slope_max = std::max(est.slope_max, s);
    }

    double bias = 0.0;
    if (cloud.mean_spacing > 0.0) {
        double range = std::log(deltas.back() / deltas.front());
        bias = 0.5 * cloud.mean_spacing / deltas.front() / std::max(range, 1e-9);
    }
    // Half-width: sampling error, discrete-support bias, and half the
    // adjacent-pair slope band (the neighborhoods of curved or lacunary
    // supports are not exact power laws across the whole delta range).
    est.exponent_halfwidth = fit.slope_stderr + bias + 0.5 * (est.slope_max - est.slope_min);
    return est;
}

std::optional<double> closed_form_neighborhood_volume(const ThinMeasure& measure, double delta) {
    const auto& s = measure.spec();
    int d = s.manifold.dim();
    auto ball = [](int m, double r) {
        switch (m) {
        case 1: return 2.0 * r;
        case 2: return kPi * r * r;
        default: return kFourPi / 3.0 * r * r * r;
        }
    };
    switch (s.kind) {
    case MeasureKind::Subtorus: {
        if (delta >= kPi)
            return std::nullopt;
        double v = ball(d - s.subtorus_k, delta);
        for (int c = 0; c < s.subtorus_k; ++c)
            v *= kTwoPi;
        return std::min(v, s.manifold.volume());
    }
    case MeasureKind::Segment: {
        if (delta >= kPi)
            return std::nullopt;
        double L = seg_length(s);
        // stadium in T^2, capsule in T^3
        double v = d == 2 ? 2.0 * delta * L + kPi * delta * delta
                          : kPi * delta * delta * L + kFourPi / 3.0 * delta * delta * delta;
        return std::min(v, s.manifold.volume());
    }
    case MeasureKind::Equator: return kFourPi * std::sin(std::min(delta, kPi / 2.0));
    case MeasureKind::Latitude: {
        double lo = std::max(s.theta0 - delta, 0.0);
        double hi = std::min(s.theta0 + delta, kPi);
        return kTwoPi * (std::cos(lo) - std::cos(hi));
    }
    case MeasureKind::AtomSet: {
        const auto& atoms = measure.atom_list();
        if (atoms.empty() || atoms.size() > 64)
            return std::nullopt;
        // valid while the delta-balls stay disjoint
        for (std::size_t i = 0; i < atoms.size(); ++i)
            for (std::size_t j = i + 1; j < atoms.size(); ++j) {
                double dist = s.manifold.is_torus()
                                  ? torus::distance(d, atoms[i].first, atoms[j].first)
                                  : sphere::distance(atoms[i].first, atoms[j].first);
                if (dist <= 2.0 * delta)
                    return std::nullopt;
            }
        double per = s.manifold.is_torus() ? ball(d, delta) : kTwoPi * (1.0 - std::cos(delta));
        return per * static_cast<double>(atoms.size());
    }
    default: return std::nullopt;
    }
}

} // namespace synthlab
