#pragma once

#include "mdfrac/geometry.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mdfrac {

enum class FacetTag : int8_t {
    Interior = 0,
    Dirichlet = 1,
    Neumann = 2,
    Interface = 3,
    Tip = 4,
};

/// One flat simplicial subdomain of the hierarchy. A 0-d subdomain is a
/// single point with one cell and no facets.
struct Subdomain {
    int dim = 0; // intrinsic dimension d
    int id = 0;  // 1-based index within dimension d

    MatX vertices_ambient;            // n x nv
    MatX vertices_local;              // d x nv (0 x nv when d = 0)
    VecX frame_origin;                // n
    MatX frame_tangents;              // n x d, orthonormal columns
    std::vector<std::vector<int>> cells;

    // Derived connectivity, built by MixedDimMesh::finalize().
    std::vector<std::vector<int>> facets;       // sorted tuples, lexicographic order
    std::vector<std::array<int, 2>> facet_cell; // {owner, neighbor or -1}
    std::vector<FacetTag> facet_tags;
    std::vector<double> cell_measure;
    std::vector<double> facet_measure;
    std::vector<VecX> facet_normal; // local coords, outward from owner
    std::vector<VecX> cell_centroid_local;
    std::vector<VecX> facet_centroid_local;

    int n_cells() const { return int(cells.size()); }
    int n_facets() const { return int(facets.size()); }
    VecX to_ambient(const VecX& local) const;
    VecX cell_centroid_ambient(int c) const;
    VecX facet_centroid_ambient(int f) const;
    VecX facet_normal_ambient(int f) const;
    double measure() const;
    int facet_index(std::vector<int> verts) const; // -1 if absent
};

/// Interface between a d-dimensional subdomain (one of its sides) and the
/// facet set of an adjacent (d+1)-dimensional subdomain. The mortar grid
/// coincides with the lower subdomain's cell partition.
struct Interface {
    int dim = 0;      // dimension of the lower subdomain
    int lower_id = 0; // its id
    int side = 0;     // j within the lower subdomain's side list
    int upper_id = 0; // id of the (d+1)-dimensional neighbor
    std::vector<int> upper_facets;
    VecX nu; // ambient unit normal, directed from the upper into the lower

    // Derived by finalize():
    std::vector<int8_t> normal_sign; // per upper facet: nu = sign * facet normal
    // per upper facet: (mortar cell, overlap measure)
    std::vector<std::vector<std::pair<int, double>>> overlaps;
};

struct RefinementMap {
    // Indexed like MixedDimMesh::subdomains.
    std::vector<std::vector<int>> cell_parent;
    std::vector<std::vector<int>> facet_parent;   // -1 when interior to a parent cell
    std::vector<std::vector<int8_t>> facet_sign;  // child vs parent facet normal
};

struct MixedDimMesh {
    int ambient_dim = 2;
    int refinement_level = 0;
    std::string preset;
    std::vector<Subdomain> subdomains; // ordered by (dim desc, id asc)
    std::vector<Interface> interfaces; // ordered by (dim asc, lower_id, side)
    std::vector<VecX> tip_points;      // ambient tip coordinates (norm exclusions)

    // allow 3D non-matching mortar overlap computation via polygon clipping
    bool clip_3d_mortars = false;

    int subdomain_index(int dim, int id) const;
    const Subdomain& subdomain(int dim, int id) const;
    Subdomain& subdomain(int dim, int id);
    int n_subdomains(int dim) const;
    int max_dim() const { return ambient_dim; }

    /// Build facet connectivity, orientations and interface overlaps.
    /// Must be called after construction and after any edit.
    void finalize();

    /// Check the geometric invariants (coverage, coincidence, orientation,
    /// measure accounting). Throws std::runtime_error on violation.
    void validate() const;
};

/// Uniform red refinement of every subdomain and mortar grid: 2^d children
/// per cell, exact midpoints, nesting preserved. The optional map receives
/// parent-child relations for nested-family transfers.
MixedDimMesh refine(const MixedDimMesh& mesh, RefinementMap* map = nullptr);

namespace detail {
/// Children of a simplex under red refinement, as vertex-index tuples into
/// an extended vertex list where midpoint of parent vertices (a, b) is
/// looked up through `midpoint`.
std::vector<std::vector<int>> red_children(const std::vector<int>& cell,
                                           const std::map<std::pair<int, int>, int>& midpoint);
} // namespace detail

} // namespace mdfrac
