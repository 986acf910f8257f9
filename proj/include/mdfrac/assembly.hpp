#pragma once

#include "mdfrac/presets.hpp"
#include "mdfrac/spaces.hpp"

namespace mdfrac {

struct SolverOptions {
    double tol = 1e-10;
    std::string backend = "direct"; // direct | minres
    int threads = 0;                // 0: MDFRAC_THREADS or hardware
};

/// Everything needed to assemble one flow problem.
struct ProblemSpec {
    const MixedDimMesh* mesh = nullptr;
    const ScalingFields* fields = nullptr;
    ProblemData data;
    SolverOptions solver;
};

/// Symmetric saddle-point system for (u0, lambda, p). The pressure row is
/// the negated conservation equation, so the assembled matrix
/// [[A, B^T], [B, 0]] is exactly symmetric and the solved p needs no sign
/// change. r_p = -(eps^2 f, q).
struct SaddleSystem {
    SpMat A_uu, A_ul, A_ll; // flux/mortar blocks of the form a_h
    SpMat B_u, B_l;         // pressure coupling rows of -b_h
    VecX r_u, r_l, r_p;
    const DofLayout* layout = nullptr;

    // composition helpers retained from assembly
    SpMat extension;     // full-flux x lambda
    SpMat injection;     // full-flux x u0
    SpMat divergence;    // cells x full-flux, entries (1, div(eps phi))_c
    SpMat jump_weighted; // cells x lambda, entries (1, [[eps_hat mu]])_c
    VecX cell_measures;  // per pressure dof
    VecX qnorm_weight;   // per pressure dof: |c| * eps_hat_max^2

    SpMat full_matrix() const;
    VecX full_rhs() const;
    int n_total() const { return layout->n_total(); }
};

/// RT0 mass matrix of one subdomain with weight K^{-1}; exact for affine
/// cells and cellwise-constant K. Rows/cols in the full flux block.
SparseOperator assemble_flux_mass(const MixedDimMesh& mesh, const ScalingFields& fields,
                                  const DofLayout& layout, int dim, int id);

/// Divergence rows (q, div(eps v))_c of one subdomain; cellwise-linear eps
/// handled through the product rule, exactly for affine cells.
SparseOperator assemble_div(const MixedDimMesh& mesh, const ScalingFields& fields,
                            const DofLayout& layout, int dim, int id);

/// Mortar mass <gamma/K_nu l, m> (diagonal) and the integrated jump
/// coupling (q, [[eps_hat mu]]) of one interface.
std::pair<SparseOperator, SparseOperator> assemble_mortar_terms(const MixedDimMesh& mesh,
                                                                const ScalingFields& fields,
                                                                const DofLayout& layout,
                                                                int interface_index);

/// Assemble the full saddle system. `extension_override` replaces the
/// compact-support extension by any other matrix with the same trace action
/// (used to verify that the solution does not depend on the choice).
SaddleSystem assemble_system(const ProblemSpec& problem, const DofLayout& layout,
                             const SpMat* extension_override = nullptr);

/// Local RT0 mass matrix on a simplex given its local vertex coordinates,
/// the inverse permeability, and the per-facet orientation signs
/// (+1 when the global facet normal is outward). Exposed for verification.
MatX local_rt0_mass(const std::vector<VecX>& verts, const MatX& K_inv,
                    const std::vector<double>& sign, const std::vector<double>& facet_meas);

} // namespace mdfrac
