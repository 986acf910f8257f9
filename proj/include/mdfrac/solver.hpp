#pragma once

#include "mdfrac/assembly.hpp"

namespace mdfrac {

struct SolverStats {
    int n_dofs = 0;
    long long nnz = 0;
    double residual = 0;
    double factor_time_ms = 0;
    double solve_time_ms = 0;
};

struct Solution {
    VecX u0;     // interior flux coefficients
    VecX lambda; // scaled normal flux per mortar cell
    VecX p;      // cell pressures, including 0-d points
    VecX u_full; // u0 + R_h lambda on the full flux block
    SolverStats stats;
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Direct sparse solve of the saddle system; relative residual is checked
/// against tol * (|b| + |M| |x|). Deterministic for a fixed ordering.
Solution solve(const SaddleSystem& sys, double tol = 1e-10,
               const std::string& backend = "direct");

/// Projected conservation residual per pressure cell:
/// Pi_Q(div eps u_h + [[eps_hat lambda_h]]) - eps^2 f. Vanishes to
/// factorization accuracy by construction of the scheme.
VecX conservation_residual(const Solution& sol, const SaddleSystem& sys);

/// max |residual| relative to the full right-hand side norm (or the
/// absolute max when the right-hand side vanishes).
double conservation_residual_rel(const Solution& sol, const SaddleSystem& sys);

/// Numerical inf-sup probe: smallest generalized singular value of the
/// pressure-coupling block in the discrete flux/pressure norms. Dense
/// eigensolve, guarded to systems with at most `max_dofs` unknowns.
double infsup_probe(const SaddleSystem& sys, int max_dofs = 20000);

} // namespace mdfrac
