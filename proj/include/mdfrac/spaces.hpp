#pragma once

#include "mdfrac/mesh.hpp"
#include "mdfrac/scaling.hpp"

#include <Eigen/Sparse>
#include <string>

namespace mdfrac {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Sparse operator between labeled blocks; finalized matrices store no
/// explicit zeros.
struct SparseOperator {
    SpMat mat;
    std::string domain;   // column block
    std::string codomain; // row block
    void finalize();
};

/// Block index maps for the lowest-order spaces: one flux DOF per facet
/// (pointwise normal flux along the global facet normal), one pressure DOF
/// per cell, one mortar DOF per mortar cell. Facets on Neumann boundaries
/// and immersed tips are eliminated. Facets on interfaces form the trace
/// block, populated from the mortars through the discrete extension.
struct DofLayout {
    // per subdomain, per facet: index into the full flux vector, or -1
    std::vector<std::vector<int>> flux_index;
    // full flux dof -> interior (u0) index, or -1 for trace dofs
    std::vector<int> u0_index;
    // per interface: full-flux dof of each upper facet (aligned with upper_facets)
    std::vector<std::vector<int>> trace_dofs;
    // per interface: first lambda index; dof = offset + mortar cell
    std::vector<int> lambda_offset;
    // per subdomain: first pressure index; dof = offset + cell
    std::vector<int> pressure_offset;

    int n_flux = 0, n_u0 = 0, n_lambda = 0, n_pressure = 0;
    int n_total() const { return n_u0 + n_lambda + n_pressure; }

    struct DimCounts {
        int flux = 0, interior_flux = 0, pressure = 0, mortar = 0;
    };
    std::map<int, DimCounts> per_dim;
};

DofLayout build_layout(const MixedDimMesh& mesh);

/// L2 projection from the mortar space of one interface onto the piecewise
/// constant normal traces of the neighboring flux grid:
/// (P lambda)|_F = sum_c |F ∩ c| / |F| * lambda_c. Rows follow the
/// interface's upper_facets order, columns the mortar cells.
SparseOperator mortar_projection(const MixedDimMesh& mesh, int interface_index);

/// Smallest singular value of the mortar projection in mass-weighted norms;
/// the mortar condition holds when this stays away from zero.
double check_mortar_condition(const MixedDimMesh& mesh, int interface_index);

/// Cellwise jump of the scaled mortar fluxes on one lower-dimensional
/// subdomain: rows are its cells (pointwise values), columns the full
/// mortar block. Entry -eps_hat at (c, lambda(ij, c)) for every side j.
SparseOperator jump_operator(const MixedDimMesh& mesh, const ScalingFields& fields,
                             const DofLayout& layout, int dim, int id);

/// Discrete extension: maps the mortar block to the full flux block. Trace
/// rows carry the mortar projection signed by the facet orientation against
/// nu; all other rows vanish (compact support).
SparseOperator extension_matrix(const MixedDimMesh& mesh, const DofLayout& layout);

/// Injection of the interior flux block into the full flux block.
SparseOperator interior_injection(const DofLayout& layout);

/// Write a sparse operator as a MatrixMarket coordinate file.
void write_matrix_market(const SpMat& mat, const std::string& path);

} // namespace mdfrac
