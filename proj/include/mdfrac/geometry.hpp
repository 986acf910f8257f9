#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mdfrac {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Absolute tolerance for point-coincidence checks in unit-box coordinates.
inline constexpr double kGeomTol = 1e-12;

/// d-measure of a simplex given its d+1 vertices in d-dimensional coordinates.
/// A single point (d = 0) has measure one (counting measure).
double simplex_measure(const std::vector<VecX>& verts);

/// Measure of the facet of a d-simplex obtained by dropping vertex `opposite`.
double facet_measure(const std::vector<VecX>& verts, int opposite);

/// Unit outward normal of the facet opposite `opposite`, within the simplex
/// plane. For d = 1 this is the signed direction +-1 as a 1-vector.
VecX facet_outward_normal(const std::vector<VecX>& verts, int opposite);

/// Centroid of a vertex set.
VecX centroid(const std::vector<VecX>& verts);

/// Euclidean distance from a point to a simplex (segment or triangle),
/// all in the same coordinate dimension.
double point_simplex_distance(const VecX& p, const std::vector<VecX>& verts);

// -- deterministic pseudo-random streams -----------------------------------
//
// Mesh jitter must be reproducible across platforms, so we avoid
// distribution objects and draw directly from splitmix64.

struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    /// Uniform double in [-1, 1].
    double sym() { return double(next() >> 11) * 0x1.0p-52 - 1.0; }
    /// Uniform double in [0, 1).
    double uni() { return double(next() >> 11) * 0x1.0p-53; }
};

uint64_t seed_from_key(const std::string& key);

// -- 1D partitions ----------------------------------------------------------

/// Partition of [0, length] into pieces delimited by forced breakpoints,
/// with `cells_per_piece[i]` cells in piece i. Interior nodes of each piece
/// are uniformly spaced and optionally jittered by `jitter` (relative to the
/// local spacing) using the stream named by `seed_key`.
std::vector<double> partition_interval(double length,
                                       const std::vector<double>& breakpoints,
                                       const std::vector<int>& cells_per_piece,
                                       double jitter,
                                       const std::string& seed_key);

// -- polygon triangulation ---------------------------------------------------

/// Triangulate a simple CCW polygon using only its boundary vertices.
/// Ear clipping with best-ear selection, followed by Lawson flips toward
/// the Delaunay triangulation of the chain. Collinear chain points are
/// handled; zero-area ears are never produced.
std::vector<std::array<int, 3>> triangulate_polygon(const std::vector<Vec2>& pts);

/// Smallest interior angle over all triangles, in radians. Diagnostic.
double min_triangle_angle(const std::vector<Vec2>& pts,
                          const std::vector<std::array<int, 3>>& tris);

// -- quadrature --------------------------------------------------------------

struct QuadratureRule {
    std::vector<VecX> points;    // barycentric-free: actual coordinates
    std::vector<double> weights; // sum to the simplex measure
};

/// Quadrature on a simplex exact for polynomials of degree `deg` (deg <= 4
/// in 1D/2D, deg <= 3 in 3D). Points are in the same coordinates as `verts`.
QuadratureRule simplex_quadrature(const std::vector<VecX>& verts, int deg);

} // namespace mdfrac
