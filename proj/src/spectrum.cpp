#include "synthlab/spectrum.hpp"

#include "synthlab/accum.hpp"
#include "synthlab/errors.hpp"
#include "synthlab/kernels.hpp"
#include "synthlab/torus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace synthlab {

Manifold Manifold::torus(int d) {
    switch (d) {
    case 1: return Manifold{ManifoldId::Torus1};
    case 2: return Manifold{ManifoldId::Torus2};
    case 3: return Manifold{ManifoldId::Torus3};
    default:
        throw ArgumentError("manifold: torus dimension must be 1, 2 or 3");
    }
}

long long SpectrumTable::weyl_count() const {
    long long n = 0;
    for (const auto& line : lines)
        n += static_cast<long long>(line.multiplicity());
    return n;
}

std::optional<std::size_t> SpectrumTable::index_of_key(long long key) const {
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (lines[i].key == key)
            return i;
    return std::nullopt;
}

SpectrumTablePtr enumerate_spectrum(const Manifold& manifold, double lambda_max) {
    if (lambda_max < 0.0)
        throw ArgumentError("enumerate_spectrum: lambda_max must be nonnegative");
    auto table = std::make_shared<SpectrumTable>();
    table->manifold = manifold;
    table->lambda_max = lambda_max;
    if (manifold.is_torus()) {
        auto groups = torus::sum_of_squares_lines(manifold.dim(), lambda_max);
        table->lines.reserve(groups.size());
        for (auto& [n, labels] : groups) {
            SpectralLine line;
            line.key = n;
            line.lambda = std::sqrt(static_cast<double>(n));
            line.basis = std::move(labels);
            table->lines.push_back(std::move(line));
        }
    } else {
        int l_max = sphere::max_degree_within(lambda_max);
        for (int l = 0; l <= l_max; ++l) {
            SpectralLine line;
            line.key = l;
            line.lambda = sphere::lambda_of_degree(l);
            line.basis.reserve(static_cast<std::size_t>(2 * l + 1));
            for (int m = -l; m <= l; ++m)
                line.basis.push_back(BasisLabel{l, m, 0});
            table->lines.push_back(std::move(line));
        }
    }
    return table;
}

WeylCheck weyl_check(const SpectrumTable& table) {
    if (table.lines.empty())
        throw ArgumentError("weyl_check: empty spectrum table");
    WeylCheck out;
    out.count = table.weyl_count();
    double L = table.lambda_max;
    if (table.manifold.is_torus()) {
        int d = table.manifold.dim();
        double unit_ball = d == 1 ? 2.0 : (d == 2 ? kPi : kFourPi / 3.0);
        out.predicted = unit_ball * std::pow(L, d);
    } else {
        out.predicted = L * L;
    }
    out.relative_deviation =
        (static_cast<double>(out.count) - out.predicted) / std::max(out.predicted, 1.0);
    return out;
}

std::complex<double> eval_basis(const Manifold& manifold, const BasisLabel& label,
                                const Point& x) {
    if (manifold.is_torus())
        return torus::eval_exponential(label, manifold.dim(), x);
    return sphere::sph_harm(label.a, label.b, x[0], x[1]);
}

double line_kernel_diag(const Manifold& manifold, const SpectralLine& line) {
    if (manifold.is_torus()) {
        double mod = torus::eigenfunction_modulus(manifold.dim());
        return static_cast<double>(line.multiplicity()) * mod * mod;
    }
    return static_cast<double>(2 * line.key + 1) / kFourPi;
}

CoefficientSet CoefficientSet::zeros(SpectrumTablePtr table) {
    CoefficientSet c;
    c.table = std::move(table);
    c.lines.resize(c.table->lines.size());
    for (std::size_t i = 0; i < c.lines.size(); ++i)
        c.lines[i].assign(c.table->lines[i].multiplicity(), {0.0, 0.0});
    return c;
}

double CoefficientSet::line_norm_sq(std::size_t i) const {
    const auto& v = lines[i];
    return kernels::sum_sq(reinterpret_cast<const double*>(v.data()), 2 * v.size());
}

double CoefficientSet::line_norm(std::size_t i) const { return std::sqrt(line_norm_sq(i)); }

std::vector<double> CoefficientSet::line_norms() const {
    std::vector<double> out(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i)
        out[i] = line_norm(i);
    return out;
}

double CoefficientSet::l2_norm_sq() const {
    NeumaierSum acc;
    for (std::size_t i = 0; i < lines.size(); ++i)
        acc.add(line_norm_sq(i));
    return acc.value();
}

double CoefficientSet::l2_norm() const { return std::sqrt(l2_norm_sq()); }

double CoefficientSet::l1_hat() const {
    NeumaierSum acc;
    for (std::size_t i = 0; i < lines.size(); ++i)
        acc.add(line_norm(i));
    return acc.value();
}

bool CoefficientSet::is_zero(double tol) const {
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (line_norm(i) > tol)
            return false;
    return true;
}

CoefficientSet& CoefficientSet::axpy(const std::complex<double>& alpha,
                                     const CoefficientSet& other) {
    if (lines.size() != other.lines.size())
        throw ArgumentError("coefficient sets use different tables");
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = 0; j < lines[i].size(); ++j)
            lines[i][j] += alpha * other.lines[i][j];
    return *this;
}

CoefficientSet& CoefficientSet::scale(const std::complex<double>& alpha) {
    for (auto& v : lines)
        for (auto& c : v)
            c *= alpha;
    return *this;
}

std::complex<double> CoefficientSet::inner(const CoefficientSet& other) const {
    if (lines.size() != other.lines.size())
        throw ArgumentError("coefficient sets use different tables");
    NeumaierSum re, im;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        for (std::size_t j = 0; j < lines[i].size(); ++j) {
            auto p = lines[i][j] * std::conj(other.lines[i][j]);
            re.add(p.real());
            im.add(p.imag());
        }
    }
    return {re.value(), im.value()};
}

const char* provenance_name(Provenance p) {
    return p == Provenance::ClosedForm ? "closed_form" : "quadrature";
}

SpectralProfile profile_of(const CoefficientSet& coeffs, Provenance provenance) {
    SpectralProfile p;
    p.table = coeffs.table;
    p.norms = coeffs.line_norms();
    p.provenance = provenance;
    return p;
}

double SpectralProfile::max_norm() const {
    double m = 0.0;
    for (double n : norms)
        m = std::max(m, n);
    return m;
}

LpHatResult lp_hat_norm(const SpectralProfile& profile, double p) {
    if (p < 1.0)
        throw ArgumentError("lp_hat_norm: p must be >= 1, got " + std::to_string(p));
    for (double n : profile.norms)
        if (!std::isfinite(n))
            throw ArgumentError("lp_hat_norm: profile has non-finite entries");

    LpHatResult out;
    out.p = p;
    double lambda_max = profile.table->lambda_max;
    for (double cut = 1.0; cut < lambda_max; cut *= 2.0)
        out.cutoffs.push_back(cut);
    out.cutoffs.push_back(lambda_max);

    const auto& lines = profile.table->lines;
    std::size_t li = 0;
    NeumaierSum acc;
    for (double cut : out.cutoffs) {
        while (li < lines.size() && lines[li].lambda <= cut) {
            acc.add(std::pow(profile.norms[li], p));
            ++li;
        }
        out.partial_sums.push_back(acc.value());
        out.partial_values.push_back(std::pow(acc.value(), 1.0 / p));
    }
    out.value = out.partial_values.back();
    return out;
}

std::size_t EvalGrid::size() const {
    if (manifold.is_sphere())
        return quad.n_points();
    std::size_t s = 1;
    for (int c = 0; c < manifold.dim(); ++c)
        s *= n_per_axis;
    return s;
}

Point EvalGrid::point(std::size_t idx) const {
    if (manifold.is_sphere())
        return quad.point(idx / quad.n_phi, idx % quad.n_phi);
    Point x{0.0, 0.0, 0.0};
    int d = manifold.dim();
    for (int c = d - 1; c >= 0; --c) {
        x[static_cast<std::size_t>(c)] =
            kTwoPi * static_cast<double>(idx % n_per_axis) / static_cast<double>(n_per_axis);
        idx /= n_per_axis;
    }
    return x;
}

double EvalGrid::weight(std::size_t idx) const {
    if (manifold.is_sphere())
        return quad.weight(idx / quad.n_phi);
    double w = 1.0;
    for (int c = 0; c < manifold.dim(); ++c)
        w *= kTwoPi / static_cast<double>(n_per_axis);
    return w;
}

double EvalGrid::max_spacing() const {
    if (manifold.is_sphere())
        return std::max(kPi / static_cast<double>(quad.n_theta()),
                        kTwoPi / static_cast<double>(quad.n_phi));
    return kTwoPi / static_cast<double>(n_per_axis);
}

EvalGrid make_eval_grid(const Manifold& manifold, double lambda_band) {
    EvalGrid g;
    g.manifold = manifold;
    if (manifold.is_sphere()) {
        int exact = std::max(16, static_cast<int>(std::ceil(kPi * lambda_band)) + 1);
        g.quad = sphere::sphere_quadrature(exact);
    } else {
        g.n_per_axis = static_cast<std::size_t>(
            std::max(32.0, 7.0 * std::ceil(std::max(1.0, lambda_band))));
    }
    return g;
}

namespace {

// Per-axis tables e^{i j t_a} for j in [-jmax, jmax] on the uniform grid.
std::vector<std::vector<std::complex<double>>> axis_tables(int jmax, std::size_t n) {
    std::vector<std::vector<std::complex<double>>> t(static_cast<std::size_t>(2 * jmax + 1));
    for (int j = -jmax; j <= jmax; ++j) {
        auto& row = t[static_cast<std::size_t>(j + jmax)];
        row.resize(n);
        for (std::size_t a = 0; a < n; ++a)
            row[a] = std::polar(1.0, j * (kTwoPi * static_cast<double>(a) / static_cast<double>(n)));
    }
    return t;
}

int table_jmax(const SpectrumTable& table) {
    int jmax = 0;
    for (const auto& line : table.lines)
        for (const auto& b : line.basis)
            jmax = std::max({jmax, std::abs(b.a), std::abs(b.b), std::abs(b.c)});
    return jmax;
}

std::vector<std::complex<double>> synthesize_torus(const CoefficientSet& coeffs,
                                                   const EvalGrid& grid) {
    const auto& table = *coeffs.table;
    int d = table.manifold.dim();
    std::size_t n = grid.n_per_axis;
    int jmax = table_jmax(table);
    if (2 * static_cast<std::size_t>(jmax) + 1 > n)
        throw ResolutionError("synthesize_on_grid: band " + std::to_string(jmax) +
                              " needs at least " + std::to_string(2 * jmax + 1) +
                              " points per axis, grid has " + std::to_string(n));
    auto tab = axis_tables(jmax, n);
    double amp = torus::eigenfunction_modulus(d);
    auto row_of = [&](int j) -> const std::vector<std::complex<double>>& {
        return tab[static_cast<std::size_t>(j + jmax)];
    };

    std::size_t stride = 2 * static_cast<std::size_t>(jmax) + 1;
    if (d == 1) {
        std::vector<std::complex<double>> out(n, {0.0, 0.0});
        for (std::size_t li = 0; li < table.lines.size(); ++li)
            for (std::size_t bi = 0; bi < table.lines[li].basis.size(); ++bi) {
                const auto c = coeffs.lines[li][bi] * amp;
                const auto& row = row_of(table.lines[li].basis[bi].a);
                for (std::size_t a = 0; a < n; ++a)
                    out[a] += c * row[a];
            }
        return out;
    }
    if (d == 2) {
        // Stage 1: collapse j2 per distinct j1; stage 2: expand over the first axis.
        std::vector<std::vector<std::complex<double>>> partial(stride);
        for (std::size_t li = 0; li < table.lines.size(); ++li)
            for (std::size_t bi = 0; bi < table.lines[li].basis.size(); ++bi) {
                const auto& lab = table.lines[li].basis[bi];
                auto& p = partial[static_cast<std::size_t>(lab.a + jmax)];
                if (p.empty())
                    p.assign(n, {0.0, 0.0});
                const auto c = coeffs.lines[li][bi] * amp;
                const auto& row = row_of(lab.b);
                for (std::size_t b = 0; b < n; ++b)
                    p[b] += c * row[b];
            }
        std::vector<std::complex<double>> out(n * n, {0.0, 0.0});
        for (int j1 = -jmax; j1 <= jmax; ++j1) {
            const auto& p = partial[static_cast<std::size_t>(j1 + jmax)];
            if (p.empty())
                continue;
            const auto& row = row_of(j1);
            for (std::size_t a = 0; a < n; ++a) {
                const auto e = row[a];
                auto* dst = out.data() + a * n;
                for (std::size_t b = 0; b < n; ++b)
                    dst[b] += e * p[b];
            }
        }
        return out;
    }
    // d == 3: collapse j3 per (j1, j2), then expand axis by axis.
    std::vector<std::vector<std::complex<double>>> pair_rows(stride * stride);
    for (std::size_t li = 0; li < table.lines.size(); ++li)
        for (std::size_t bi = 0; bi < table.lines[li].basis.size(); ++bi) {
            const auto& lab = table.lines[li].basis[bi];
            auto& p = pair_rows[static_cast<std::size_t>(lab.a + jmax) * stride +
                                static_cast<std::size_t>(lab.b + jmax)];
            if (p.empty())
                p.assign(n, {0.0, 0.0});
            const auto c = coeffs.lines[li][bi] * amp;
            const auto& row = row_of(lab.c);
            for (std::size_t t = 0; t < n; ++t)
                p[t] += c * row[t];
        }
    std::vector<std::complex<double>> out(n * n * n, {0.0, 0.0});
    std::vector<std::complex<double>> plane(n * n);
    for (int j1 = -jmax; j1 <= jmax; ++j1) {
        bool any = false;
        std::fill(plane.begin(), plane.end(), std::complex<double>{0.0, 0.0});
        for (int j2 = -jmax; j2 <= jmax; ++j2) {
            const auto& p = pair_rows[static_cast<std::size_t>(j1 + jmax) * stride +
                                      static_cast<std::size_t>(j2 + jmax)];
            if (p.empty())
                continue;
            any = true;
            const auto& row = row_of(j2);
            for (std::size_t b = 0; b < n; ++b) {
                const auto e = row[b];
                auto* dst = plane.data() + b * n;
                for (std::size_t t = 0; t < n; ++t)
                    dst[t] += e * p[t];
            }
        }
        if (!any)
            continue;
        const auto& row = row_of(j1);
        for (std::size_t a = 0; a < n; ++a) {
            const auto e = row[a];
            auto* dst = out.data() + a * n * n;
            for (std::size_t bc = 0; bc < n * n; ++bc)
                dst[bc] += e * plane[bc];
        }
    }
    return out;
}

CoefficientSet analyze_torus(const std::vector<std::complex<double>>& values,
                             const EvalGrid& grid, SpectrumTablePtr table) {
    int d = table->manifold.dim();
    std::size_t n = grid.n_per_axis;
    int jmax = table_jmax(*table);
    if (2 * static_cast<std::size_t>(jmax) + 1 > n)
        throw ResolutionError("analyze_on_grid: band " + std::to_string(jmax) +
                              " needs at least " + std::to_string(2 * jmax + 1) +
                              " points per axis, grid has " + std::to_string(n));
    auto tab = axis_tables(jmax, n);
    std::size_t stride = 2 * static_cast<std::size_t>(jmax) + 1;
    double w_axis = kTwoPi / static_cast<double>(n);
    auto row_of = [&](int j) -> const std::vector<std::complex<double>>& {
        return tab[static_cast<std::size_t>(j + jmax)];
    };

    // Successive axis reductions: after axis k the data is indexed by
    // (j1..jk, remaining grid axes).
    std::vector<std::complex<double>> cur = values;
    std::size_t grid_tail = grid.size(); // n^d
    std::size_t freq_head = 1;
    for (int axis = 0; axis < d; ++axis) {
        grid_tail /= n;
        std::vector<std::complex<double>> next(freq_head * stride * grid_tail, {0.0, 0.0});
        for (std::size_t h = 0; h < freq_head; ++h) {
            const auto* src_base = cur.data() + h * n * grid_tail;
            for (int j = -jmax; j <= jmax; ++j) {
                const auto& row = row_of(j);
                auto* dst = next.data() + (h * stride + static_cast<std::size_t>(j + jmax)) * grid_tail;
                for (std::size_t a = 0; a < n; ++a) {
                    const auto e = std::conj(row[a]) * w_axis;
                    const auto* src = src_base + a * grid_tail;
                    for (std::size_t t = 0; t < grid_tail; ++t)
                        dst[t] += e * src[t];
                }
            }
        }
        cur = std::move(next);
        freq_head *= stride;
    }

    double amp = torus::eigenfunction_modulus(d);
    auto out = CoefficientSet::zeros(std::move(table));
    const auto& lines = out.table->lines;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        for (std::size_t bi = 0; bi < lines[li].basis.size(); ++bi) {
            const auto& lab = lines[li].basis[bi];
            std::size_t idx = static_cast<std::size_t>(lab.a + jmax);
            if (d >= 2)
                idx = idx * stride + static_cast<std::size_t>(lab.b + jmax);
            if (d >= 3)
                idx = idx * stride + static_cast<std::size_t>(lab.c + jmax);
            out.lines[li][bi] = cur[idx] * amp;
        }
    }
    return out;
}

} // namespace

std::vector<std::complex<double>> synthesize_on_grid(const CoefficientSet& coeffs,
                                                     const EvalGrid& grid) {
    if (grid.manifold.is_torus())
        return synthesize_torus(coeffs, grid);
    // Sphere: reshape per-line vectors into band coefficients.
    const auto& table = *coeffs.table;
    sphere::BandCoefficients band(table.lines.size());
    for (std::size_t li = 0; li < table.lines.size(); ++li)
        band[li] = coeffs.lines[li];
    return sphere::synthesize(grid.quad, band);
}

CoefficientSet analyze_on_grid(const std::vector<std::complex<double>>& values,
                               const EvalGrid& grid, SpectrumTablePtr table) {
    if (grid.manifold.is_torus())
        return analyze_torus(values, grid, std::move(table));
    int l_max = static_cast<int>(table->lines.size()) - 1;
    auto band = sphere::analyze(grid.quad, values, l_max);
    auto out = CoefficientSet::zeros(std::move(table));
    for (std::size_t li = 0; li < out.lines.size(); ++li)
        out.lines[li] = band[li];
    return out;
}

double grid_l2_norm(const std::vector<std::complex<double>>& values, const EvalGrid& grid) {
    NeumaierSum acc;
    for (std::size_t i = 0; i < values.size(); ++i)
        acc.add(grid.weight(i) * std::norm(values[i]));
    return std::sqrt(acc.value());
}

double grid_sup_norm(const std::vector<std::complex<double>>& values) {
    double m = 0.0;
    for (const auto& v : values)
        m = std::max(m, std::abs(v));
    return m;
}

} // namespace synthlab
