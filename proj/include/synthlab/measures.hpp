#pragma once

#include "synthlab/spectrum.hpp"
#include "synthlab/types.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace synthlab {

enum class MeasureKind {
    Subtorus,      // k-dimensional coordinate sub-torus of T^d
    Segment,       // straight segment between two points of T^d, arclength
    MomentCurve,   // (t, t^2, ..., t^d), pushforward of dt
    AtomSet,       // weighted point masses
    ProductCantor, // level-n middle-thirds Cantor set per axis, uniform atoms
    Equator,       // arclength on {theta = pi/2} of S^2
    Latitude       // arclength on {theta = theta0} of S^2
};

const char* measure_kind_name(MeasureKind k);

// Smooth density along a curve parameter: a0 + a1 cos(freq * t) on closed
// curves (t in [0, 2 pi)), a0 + a1 cos(2 pi freq t / t_end) on arcs.
struct Density {
    double a0 = 1.0;
    double a1 = 0.0;
    int freq = 0;

    bool is_uniform() const { return a1 == 0.0 || freq == 0; }

    bool operator==(const Density&) const = default;
};

struct MeasureSpec {
    Manifold manifold;
    MeasureKind kind = MeasureKind::Subtorus;
    int subtorus_k = 1;
    Point segment_a{0.0, 0.0, 0.0};
    Point segment_b{kPi, 0.0, 0.0};
    double curve_t_end = 1.0;
    std::vector<std::pair<Point, double>> atoms;
    int cantor_level = 4;
    double cantor_mass = 1.0;
    double theta0 = kPi / 2.0;
    Density density;

    bool operator==(const MeasureSpec&) const = default;
};

// A discretizable measure carried by a thin subset: nominal support dimension,
// total mass, a support sampler, and a closed-form coefficient rule where one
// exists.
class ThinMeasure {
  public:
    explicit ThinMeasure(MeasureSpec spec);

    const MeasureSpec& spec() const { return spec_; }
    const Manifold& manifold() const { return spec_.manifold; }
    MeasureKind kind() const { return spec_.kind; }

    double nominal_dim() const;
    double total_mass() const;
    bool has_closed_form() const;
    bool is_curve() const;

    // Curve presets: point at parameter t in [0, param_end). Atom presets: the
    // atom list itself.
    double param_end() const;
    Point curve_point(double t) const;
    double curve_speed(double t) const;
    double density_at(double t) const;
    const std::vector<std::pair<Point, double>>& atom_list() const { return atoms_; }

    // Deterministic, geometrically uniform support sample (>= target points for
    // curves; exactly the atom list for atomic presets).
    std::vector<Point> support_points(std::size_t target) const;

    // Random support point, counter-driven.
    Point sample_support(std::uint64_t seed, std::uint64_t counter) const;

  private:
    MeasureSpec spec_;
    std::vector<std::pair<Point, double>> atoms_; // atom-backed presets
};

ThinMeasure make_measure(const MeasureSpec& spec);

// Full coefficient set: closed form when the preset provides one, otherwise
// quadrature with self-convergent order.
CoefficientSet coefficients(const ThinMeasure& measure, SpectrumTablePtr table);

// Forced quadrature path (cross-checks). nodes = 0 picks the automatic order
// from the table band and doubles until successive values agree to 1e-9.
CoefficientSet coefficients_quadrature(const ThinMeasure& measure, SpectrumTablePtr table,
                                       std::size_t nodes = 0);

// Single line: coefficient vector and its l2 norm.
std::pair<std::vector<std::complex<double>>, double>
project(const ThinMeasure& measure, const SpectrumTablePtr& table, std::size_t line_index);

SpectralProfile spectral_profile(const ThinMeasure& measure, SpectrumTablePtr table);

// Support cloud in kernel layout for nearest-distance sweeps.
struct SupportCloud {
    Manifold manifold;
    std::array<std::vector<double>, 3> coords; // torus: wrapped coords; sphere: xyz
    double mean_spacing = 0.0;

    std::size_t size() const { return coords[0].size(); }
    // Torus: flat min-image distance. Sphere: great-circle distance.
    double distance(const Point& x) const;
};

SupportCloud build_support_cloud(const ThinMeasure& measure, std::size_t target);

struct VolumeEstimate {
    std::vector<double> deltas;
    std::vector<double> volumes;
    std::vector<double> stderrs;
    std::vector<long long> counts;
    long long n_samples = 0;
    double fitted_exponent = 0.0;
    double fitted_log_c = 0.0; // log C_E in |E^delta| ~ C_E delta^q
    double exponent_halfwidth = 0.0;
    double slope_min = 0.0; // adjacent-pair slope band (lacunary sets oscillate)
    double slope_max = 0.0;
    double support_spacing = 0.0; // O(spacing) distance bias documented per run
};

// Monte Carlo volume of the delta-neighborhoods of the support with a log-log
// exponent fit. support_target = 0 picks max(4096, 64 * lambda-ish) cloud points.
VolumeEstimate minkowski_volume(const ThinMeasure& measure, std::vector<double> deltas,
                                long long n_samples, std::uint64_t seed, int threads = 1,
                                std::size_t support_target = 0);

// Exact |E^delta| for presets with elementary neighborhood geometry.
std::optional<double> closed_form_neighborhood_volume(const ThinMeasure& measure, double delta);

} // namespace synthlab
