#pragma once

#include "mdfrac/mesh.hpp"
#include "mdfrac/scaling.hpp"

#include <functional>
#include <string>

namespace mdfrac {

struct MeshOptions {
    /// Force matching side traces and mortar grids (domain-decomposition
    /// experiments). Default meshes are non-matching along all fractures.
    bool matching_sides = false;
    /// Enable convex-clipping overlaps for non-matching 3D mortars.
    bool clip_3d_mortars = false;
};

/// Boundary and source data for a benchmark run.
struct ProblemData {
    std::function<double(const VecX&)> dirichlet;      // g on the ambient point
    std::function<double(const VecX&, int)> source;    // f(x, d)
    std::string name;
};

bool is_known_preset(const std::string& preset);

/// Build the nested-refinement-level mesh for one of the benchmark presets:
/// square2d, cube3d, single-fracture-2d, unfractured-2d.
MixedDimMesh build_benchmark_mesh(const std::string& preset, int level,
                                  const MeshOptions& options = {});

ParameterTable default_parameters(const std::string& preset);
ProblemData default_problem_data(const std::string& preset);

/// Named boundary/source selections usable from run configurations.
ProblemData problem_data_by_name(const std::string& name);

/// Human-readable dimensional decomposition and parameter table.
std::string describe(const std::string& preset);

namespace detail {
MixedDimMesh build_square2d_level0(const MeshOptions&);
MixedDimMesh build_single_fracture_level0(const MeshOptions&);
MixedDimMesh build_unfractured_level0(const MeshOptions&);
MixedDimMesh build_cube3d_level0(const MeshOptions&);
} // namespace detail

} // namespace mdfrac
