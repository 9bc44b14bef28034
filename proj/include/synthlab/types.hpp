#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace synthlab {

inline constexpr double kPi = 3.141592653589793238462643383279;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kFourPi = 4.0 * kPi;

// The implemented manifold models: flat tori R^d/(2 pi Z)^d for d in {1,2,3}
// and the unit 2-sphere.
enum class ManifoldId : std::uint8_t { Torus1, Torus2, Torus3, Sphere2 };

struct Manifold {
    ManifoldId id = ManifoldId::Torus2;

    static Manifold torus(int d);
    static Manifold sphere2() { return Manifold{ManifoldId::Sphere2}; }

    bool is_torus() const { return id != ManifoldId::Sphere2; }
    bool is_sphere() const { return id == ManifoldId::Sphere2; }

    int dim() const {
        switch (id) {
        case ManifoldId::Torus1: return 1;
        case ManifoldId::Torus2: return 2;
        case ManifoldId::Torus3: return 3;
        case ManifoldId::Sphere2: return 2;
        }
        return 2;
    }

    double volume() const {
        if (is_sphere())
            return kFourPi;
        double v = 1.0;
        for (int i = 0; i < dim(); ++i)
            v *= kTwoPi;
        return v;
    }

    const char* name() const {
        switch (id) {
        case ManifoldId::Torus1: return "torus1";
        case ManifoldId::Torus2: return "torus2";
        case ManifoldId::Torus3: return "torus3";
        case ManifoldId::Sphere2: return "sphere2";
        }
        return "?";
    }

    bool operator==(const Manifold&) const = default;
};

// One eigenfunction label. Torus: the lattice vector (a,b,c) truncated to the
// model dimension. Sphere: degree/order (a,b) = (l,m).
struct BasisLabel {
    int a = 0;
    int b = 0;
    int c = 0;

    bool operator==(const BasisLabel&) const = default;
};

// A point on the model. Torus: coordinates in [0, 2 pi)^d (unused entries 0).
// Sphere: (colatitude theta in [0, pi], longitude phi in [0, 2 pi), 0).
using Point = std::array<double, 3>;

inline double wrap_two_pi(double x) {
    double y = std::fmod(x, kTwoPi);
    return y < 0.0 ? y + kTwoPi : y;
}

} // namespace synthlab
