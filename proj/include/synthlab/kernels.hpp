#pragma once

#include <cstddef>
#include <string>

namespace synthlab::kernels {

// Inner arithmetic loops: compensated reductions and nearest-point distance
// sweeps. A scalar reference implementation always exists; an AVX2 variant is
// selected at runtime when the CPU supports it. Backends agree bit-exactly on
// min-distance results and to ~1 ulp relative on reductions (lane splitting
// changes the association); the equivalence tests pin both contracts.
enum class Backend { Scalar, Avx2 };

// Currently active backend. Resolved once per process from CPUID, overridable
// with SYNTHLAB_KERNELS=scalar|avx2 in the environment.
Backend active_backend();
std::string backend_name();

// Test hook. Throws std::runtime_error if the backend is unavailable.
void force_backend(Backend b);

// Compensated sum of a[0..n).
double sum(const double* a, std::size_t n);

// Compensated dot product: sum of a[i] * b[i].
double dot(const double* a, const double* b, std::size_t n);

// Sum of squares; dot(a, a, n).
double sum_sq(const double* a, std::size_t n);

// Squared distance from p to the nearest of n cloud points, flat torus metric
// with period 2*pi per coordinate. coords[c][i] is coordinate c of point i;
// all values (including p) must already lie in [0, 2*pi). dim in {1,2,3}.
double min_sq_dist_torus(const double* p, int dim, const double* const* coords, std::size_t n);

// Squared Euclidean distance in R^3 from p to the nearest cloud point
// (chordal metric for points on the unit sphere).
double min_sq_dist_euclid3(const double* p, const double* xs, const double* ys, const double* zs,
                           std::size_t n);

} // namespace synthlab::kernels
