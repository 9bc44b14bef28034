#include "synthlab/sphere.hpp"

#include "synthlab/errors.hpp"
#include "synthlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace synthlab::sphere {

double lambda_of_degree(int l) {
    if (l < 0)
        throw ArgumentError("sphere: degree must be nonnegative");
    return std::sqrt(static_cast<double>(l) * (l + 1.0));
}

int max_degree_within(double lambda_max) {
    if (lambda_max < 0.0)
        return -1;
    // l(l+1) <= lambda^2  <=>  l <= (-1 + sqrt(1 + 4 lambda^2)) / 2
    int l = static_cast<int>((-1.0 + std::sqrt(1.0 + 4.0 * lambda_max * lambda_max)) / 2.0 + 1e-12);
    while (lambda_of_degree(l + 1) <= lambda_max)
        ++l;
    while (l > 0 && lambda_of_degree(l) > lambda_max)
        --l;
    return l;
}

double legendre_p(int l, double x) {
    if (l < 0)
        throw ArgumentError("legendre_p: degree must be nonnegative");
    if (std::abs(x) > 1.0)
        throw ArgumentError("legendre_p: |x| must be <= 1, got " + std::to_string(x));
    if (l == 0)
        return 1.0;
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= l; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

namespace {

// Diagonal start N_m^m(x), then the (l, m) three-term recurrence upward in l.
// All factors stay O(1), so no overflow for large l.
double diag_start(int m, double sin_theta) {
    double v = std::sqrt(1.0 / kFourPi);
    for (int k = 1; k <= m; ++k)
        v *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * sin_theta;
    return v;
}

inline double recur_a(int l, int m) {
    return std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
}

} // namespace

double legendre_normalized(int l, int m, double x) {
    if (m < 0 || l < m)
        throw ArgumentError("legendre_normalized: need 0 <= m <= l");
    if (std::abs(x) > 1.0)
        throw ArgumentError("legendre_normalized: |x| must be <= 1");
    double sin_theta = std::sqrt(std::max(0.0, 1.0 - x * x));
    double pmm = diag_start(m, sin_theta);
    if (l == m)
        return pmm;
    double pm1 = std::sqrt(2.0 * m + 3.0) * x * pmm;
    if (l == m + 1)
        return pm1;
    double prev = pmm, cur = pm1;
    for (int k = m + 2; k <= l; ++k) {
        double ak = recur_a(k, m);
        double next = ak * (x * cur - prev / recur_a(k - 1, m));
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<double> legendre_normalized_row(int L, double x) {
    if (L < 0)
        throw ArgumentError("legendre_normalized_row: L must be nonnegative");
    std::vector<double> row(legendre_row_index(L, L, L) + 1);
    double sin_theta = std::sqrt(std::max(0.0, 1.0 - x * x));
    for (int m = 0; m <= L; ++m) {
        double pmm = diag_start(m, sin_theta);
        row[legendre_row_index(L, m, m)] = pmm;
        if (m + 1 <= L) {
            double pm1 = std::sqrt(2.0 * m + 3.0) * x * pmm;
            row[legendre_row_index(L, m + 1, m)] = pm1;
            double prev = pmm, cur = pm1;
            for (int l = m + 2; l <= L; ++l) {
                double al = recur_a(l, m);
                double next = al * (x * cur - prev / recur_a(l - 1, m));
                prev = cur;
                cur = next;
                row[legendre_row_index(L, l, m)] = cur;
            }
        }
    }
    return row;
}

std::complex<double> sph_harm(int l, int m, double theta, double phi) {
    if (l < std::abs(m))
        throw ArgumentError("sph_harm: need l >= |m|");
    int ma = std::abs(m);
    double n = legendre_normalized(l, ma, std::cos(theta));
    std::complex<double> y = n * std::polar(1.0, ma * phi);
    if (m < 0) {
        y = std::conj(y);
        if (ma % 2 == 1)
            y = -y;
    }
    return y;
}

double SphereQuadrature::theta(std::size_t i) const {
    return std::acos(std::clamp(cos_nodes[i], -1.0, 1.0));
}

Point SphereQuadrature::point(std::size_t i, std::size_t j) const {
    return Point{theta(i), phi(j), 0.0};
}

SphereQuadrature sphere_quadrature(int exactness) {
    if (exactness < 0)
        throw ArgumentError("sphere_quadrature: exactness must be nonnegative");
    SphereQuadrature q;
    q.exactness = exactness;
    auto gl = gauss_legendre(static_cast<std::size_t>(exactness) + 1);
    q.cos_nodes = std::move(gl.nodes);
    q.theta_weights = std::move(gl.weights);
    q.n_phi = static_cast<std::size_t>(2 * exactness + 2);
    q.phi_weight = kTwoPi / static_cast<double>(q.n_phi);
    return q;
}

namespace {

// conj(Y_l^m) = sign(m) * N_l^{|m|} * e^{-i m phi} with sign(m) = (-1)^m for m < 0.
inline double conj_sign(int m) { return (m < 0 && (-m) % 2 == 1) ? -1.0 : 1.0; }

} // namespace

BandCoefficients analyze(const SphereQuadrature& q,
                         const std::vector<std::complex<double>>& grid_values, int L) {
    if (L > q.exactness)
        throw ResolutionError("sphere analyze: requested band " + std::to_string(L) +
                              " exceeds quadrature exactness " + std::to_string(q.exactness) +
                              "; need exactness >= " + std::to_string(L));
    if (grid_values.size() != q.n_points())
        throw ArgumentError("sphere analyze: grid size mismatch");
    std::size_t nt = q.n_theta(), np = q.n_phi;

    // Ring transforms g_m(theta_i) = w_phi sum_j f_ij e^{-im phi_j}, m = -L..L.
    std::size_t n_m = static_cast<std::size_t>(2 * L + 1);
    std::vector<std::complex<double>> ring(nt * n_m);
    for (std::size_t i = 0; i < nt; ++i) {
        const std::complex<double>* f = grid_values.data() + i * np;
        for (int m = -L; m <= L; ++m) {
            std::complex<double> s{0.0, 0.0};
            for (std::size_t j = 0; j < np; ++j)
                s += f[j] * std::polar(1.0, -m * q.phi(j));
            ring[i * n_m + static_cast<std::size_t>(m + L)] = q.phi_weight * s;
        }
    }

    // Weighted Legendre rows per node, then theta sums via the dot kernel.
    std::vector<std::vector<double>> nw(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        nw[i] = legendre_normalized_row(L, q.cos_nodes[i]);
        for (double& v : nw[i])
            v *= q.theta_weights[i];
    }

    BandCoefficients coeffs(static_cast<std::size_t>(L) + 1);
    for (int l = 0; l <= L; ++l)
        coeffs[l].assign(static_cast<std::size_t>(2 * l + 1), {0.0, 0.0});

    std::vector<double> col_re(nt), col_im(nt), col_n(nt);
    for (int m = -L; m <= L; ++m) {
        int ma = std::abs(m);
        for (std::size_t i = 0; i < nt; ++i) {
            const auto& g = ring[i * n_m + static_cast<std::size_t>(m + L)];
            col_re[i] = g.real();
            col_im[i] = g.imag();
        }
        for (int l = ma; l <= L; ++l) {
            for (std::size_t i = 0; i < nt; ++i)
                col_n[i] = nw[i][legendre_row_index(L, l, ma)];
            double re = kernels::dot(col_n.data(), col_re.data(), nt);
            double im = kernels::dot(col_n.data(), col_im.data(), nt);
            coeffs[l][static_cast<std::size_t>(m + l)] =
                conj_sign(m) * std::complex<double>(re, im);
        }
    }
    return coeffs;
}

std::vector<std::complex<double>> synthesize(const SphereQuadrature& q,
                                             const BandCoefficients& coeffs) {
    int L = static_cast<int>(coeffs.size()) - 1;
    std::size_t nt = q.n_theta(), np = q.n_phi;
    // h_m(theta_i) = sum_l c_{l,m} sign(m) N_l^{|m|}(x_i)
    std::size_t n_m = static_cast<std::size_t>(2 * L + 1);
    std::vector<std::complex<double>> h(nt * n_m, {0.0, 0.0});
    for (std::size_t i = 0; i < nt; ++i) {
        auto row = legendre_normalized_row(L, q.cos_nodes[i]);
        for (int m = -L; m <= L; ++m) {
            int ma = std::abs(m);
            std::complex<double> s{0.0, 0.0};
            for (int l = ma; l <= L; ++l)
                s += coeffs[l][static_cast<std::size_t>(m + l)] *
                     (conj_sign(m) * row[legendre_row_index(L, l, ma)]);
            h[i * n_m + static_cast<std::size_t>(m + L)] = s;
        }
    }
    std::vector<std::complex<double>> grid(nt * np, {0.0, 0.0});
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t j = 0; j < np; ++j) {
            std::complex<double> s{0.0, 0.0};
            for (int m = -L; m <= L; ++m)
                s += h[i * n_m + static_cast<std::size_t>(m + L)] * std::polar(1.0, m * q.phi(j));
            grid[i * np + j] = s;
        }
    }
    return grid;
}

double distance(const Point& a, const Point& b) {
    auto u = to_xyz(a);
    auto v = to_xyz(b);
    double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    return std::acos(std::clamp(dot, -1.0, 1.0));
}

std::array<double, 3> to_xyz(const Point& p) {
    double st = std::sin(p[0]);
    return {st * std::cos(p[1]), st * std::sin(p[1]), std::cos(p[0])};
}

} // namespace synthlab::sphere
