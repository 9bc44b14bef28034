#include "synthlab/window.hpp"

#include "synthlab/accum.hpp"
#include "synthlab/quadrature.hpp"

#include <cmath>
#include <cstddef>

namespace synthlab {

namespace {

double bump_profile(double xi) {
    double s = 1.0 - xi * xi;
    return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
}

} // namespace

Window Window::bump(double t_resolve) {
    Window w;
    w.kind_ = WindowKind::Bump;
    // Start at 256 nodes and double until psi(0) stabilizes to 1e-12; keep
    // doubling until the rule also resolves oscillations up to t_resolve
    // (about two nodes per period of cos(t xi)).
    std::size_t n = 256;
    double prev = -1.0;
    for (;;) {
        auto gl = gauss_legendre(n);
        NeumaierSum total;
        for (std::size_t i = 0; i < n; ++i)
            total.add(gl.weights[i] * bump_profile(gl.nodes[i]));
        double psi0 = total.value();
        bool stable = prev >= 0.0 && std::abs(psi0 - prev) <= 1e-12 * psi0;
        bool resolved = static_cast<double>(n) >= 0.5 * t_resolve + 64.0;
        if ((stable && resolved) || n >= 1u << 20) {
            w.nodes_ = gl.nodes;
            w.wpsi_.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                w.wpsi_[i] = gl.weights[i] * bump_profile(gl.nodes[i]) / psi0;
            break;
        }
        prev = psi0;
        n *= 2;
    }
    w.locate_half_level();
    return w;
}

Window Window::fejer() {
    Window w;
    w.kind_ = WindowKind::Fejer;
    w.locate_half_level();
    return w;
}

double Window::eval(double t) const {
    if (kind_ == WindowKind::Fejer) {
        if (t == 0.0)
            return 1.0;
        double h = 0.5 * t;
        double s = std::sin(h) / h;
        return s * s;
    }
    NeumaierSum acc;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        acc.add(wpsi_[i] * std::cos(t * nodes_[i]));
    return acc.value();
}

void Window::locate_half_level() {
    // First crossing of |psi| below 1/2, by scan plus bisection.
    const double level = 0.5;
    double step = 1e-2;
    double t = 0.0;
    while (std::abs(eval(t + step)) >= level)
        t += step;
    double lo = t, hi = t + step;
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        if (std::abs(eval(mid)) >= level)
            lo = mid;
        else
            hi = mid;
    }
    big_c_psi_ = 0.5 * (lo + hi);
}

} // namespace synthlab
