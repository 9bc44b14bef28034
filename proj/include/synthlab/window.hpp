#pragma once

#include <string>
#include <vector>

namespace synthlab {

// Even window psi with compactly supported transform on [-1, 1] and
// psi(0) = 1. The default profile is the smooth bump exp(-1/(1-xi^2)); a
// Fejer window (triangular profile, psi(t) = sinc^2(t/2)) ships as the
// documented alternative with slower decay.
enum class WindowKind { Bump, Fejer };

class Window {
  public:
    // t_resolve: largest |t| the cosine-transform quadrature must resolve.
    static Window bump(double t_resolve = 2048.0);
    static Window fejer();

    WindowKind kind() const { return kind_; }
    const char* name() const { return kind_ == WindowKind::Bump ? "bump" : "fejer"; }

    // psi(t); even, psi(0) = 1.
    double eval(double t) const;
    double operator()(double t) const { return eval(t); }

    // Level constant: half of max |psi| = 1/2.
    double c_psi() const { return 0.5; }
    // Largest t* with |psi(t)| >= c_psi on all of [0, t*].
    double big_c_psi() const { return big_c_psi_; }
    // Propagation radius of the multiplier at scale R is supp_radius / R.
    double supp_radius() const { return 1.0; }

    std::size_t quadrature_nodes() const { return nodes_.size(); }

  private:
    Window() = default;
    void locate_half_level();

    WindowKind kind_ = WindowKind::Fejer;
    std::vector<double> nodes_;  // cosine-transform abscissae in [-1, 1]
    std::vector<double> wpsi_;   // weight * profile / normalization
    double big_c_psi_ = 0.0;
};

} // namespace synthlab
