#include "mdfrac/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include <chrono>

namespace mdfrac {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string singular_block_hint(const SaddleSystem& sys) {
    // report which block carries an empty row, the usual structural culprit
    const DofLayout& l = *sys.layout;
    SpMat full = sys.full_matrix();
    std::vector<bool> nonempty(full.rows(), false);
    for (int k = 0; k < full.outerSize(); ++k)
        for (SpMat::InnerIterator it(full, k); it; ++it)
            if (it.value() != 0.0) nonempty[it.row()] = true;
    for (int r = 0; r < full.rows(); ++r) {
        if (nonempty[r]) continue;
        if (r < l.n_u0) return "u0 row " + std::to_string(r);
        if (r < l.n_u0 + l.n_lambda) return "lambda row " + std::to_string(r - l.n_u0);
        return "pressure row " + std::to_string(r - l.n_u0 - l.n_lambda);
    }
    return "no empty row; numerically singular factorization";
}

} // namespace

Solution solve(const SaddleSystem& sys, double tol, const std::string& backend) {
    if (!(tol > 0) || tol > 1e-6) throw std::invalid_argument("solver tol must lie in (0, 1e-6]");
    SpMat full = sys.full_matrix();
    VecX rhs = sys.full_rhs();

    Solution sol;
    sol.stats.n_dofs = int(full.rows());
    sol.stats.nnz = full.nonZeros();

    VecX x;
    auto t0 = std::chrono::steady_clock::now();
    if (backend == "direct") {
        Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
        lu.analyzePattern(full);
        lu.factorize(full);
        if (lu.info() != Eigen::Success)
            throw SolverError("sparse factorization failed (" + singular_block_hint(sys) + ")");
        sol.stats.factor_time_ms = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        x = lu.solve(rhs);
        sol.stats.solve_time_ms = ms_since(t0);
    } else if (backend == "minres") {
        Eigen::MINRES<SpMat> it(full);
        it.setTolerance(std::min(tol, 1e-12));
        it.setMaxIterations(20 * full.rows());
        sol.stats.factor_time_ms = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        x = it.solve(rhs);
        sol.stats.solve_time_ms = ms_since(t0);
        if (it.info() != Eigen::Success)
            throw SolverError("MINRES did not reach the requested tolerance");
    } else {
        throw std::invalid_argument("unknown solver backend: " + backend);
    }

    double mnorm = 0;
    for (int k = 0; k < full.outerSize(); ++k)
        for (SpMat::InnerIterator it(full, k); it; ++it) mnorm = std::max(mnorm, std::abs(it.value()));
    double resid = (full * x - rhs).norm();
    double scale = rhs.norm() + mnorm * x.norm();
    sol.stats.residual = scale > 0 ? resid / scale : resid;
    if (!x.allFinite()) throw SolverError("solution contains non-finite entries");
    if (sol.stats.residual > tol)
        throw SolverError("residual " + std::to_string(sol.stats.residual) +
                          " above tolerance " + std::to_string(tol));

    const DofLayout& l = *sys.layout;
    sol.u0 = x.segment(0, l.n_u0);
    sol.lambda = x.segment(l.n_u0, l.n_lambda);
    sol.p = x.segment(l.n_u0 + l.n_lambda, l.n_pressure);
    sol.u_full = sys.injection * sol.u0 + sys.extension * sol.lambda;
    return sol;
}

VecX conservation_residual(const Solution& sol, const SaddleSystem& sys) {
    // per cell: (div eps u + [[eps_hat lambda]] - eps^2 f) integrated, then
    // divided by the cell measure to report the projected pointwise value
    VecX integrated = sys.divergence * sol.u_full + sys.jump_weighted * sol.lambda + sys.r_p;
    return integrated.cwiseQuotient(sys.cell_measures);
}

double conservation_residual_rel(const Solution& sol, const SaddleSystem& sys) {
    double m = conservation_residual(sol, sys).cwiseAbs().maxCoeff();
    double scale = sys.full_rhs().norm();
    return scale > 0 ? m / scale : m;
}

double infsup_probe(const SaddleSystem& sys, int max_dofs) {
    const DofLayout& l = *sys.layout;
    if (l.n_total() > max_dofs)
        throw std::runtime_error("infsup_probe size guard exceeded (" +
                                 std::to_string(l.n_total()) + " dofs)");
    const int nx = l.n_u0 + l.n_lambda, np = l.n_pressure;

    // X-norm Gram: a_h plus the projected divergence term B^T W^{-1} B
    std::vector<Triplet> trip;
    auto insert = [&](const SpMat& m, int r0, int c0) {
        for (int k = 0; k < m.outerSize(); ++k)
            for (SpMat::InnerIterator it(m, k); it; ++it)
                trip.emplace_back(int(it.row()) + r0, int(it.col()) + c0, it.value());
    };
    insert(sys.A_uu, 0, 0);
    insert(sys.A_ul, 0, l.n_u0);
    insert(SpMat(sys.A_ul.transpose()), l.n_u0, 0);
    insert(sys.A_ll, l.n_u0, l.n_u0);
    SpMat Gx(nx, nx);
    Gx.setFromTriplets(trip.begin(), trip.end());
    SpMat B(np, nx);
    {
        std::vector<Triplet> tb;
        auto add = [&](const SpMat& m, int c0) {
            for (int k = 0; k < m.outerSize(); ++k)
                for (SpMat::InnerIterator it(m, k); it; ++it)
                    tb.emplace_back(int(it.row()), int(it.col()) + c0, it.value());
        };
        add(sys.B_u, 0);
        add(sys.B_l, l.n_u0);
        B.setFromTriplets(tb.begin(), tb.end());
    }
    VecX winv = sys.cell_measures.cwiseInverse();
    Gx += SpMat(B.transpose() * winv.asDiagonal() * B);

    Eigen::SimplicialLDLT<SpMat> ldlt(Gx);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("infsup_probe: X-norm Gram is singular (degenerate parameters?)");

    // S = B Gx^{-1} B^T against the pressure-norm Gram (dense at probe sizes)
    Eigen::MatrixXd Bd(B);
    Eigen::MatrixXd GinvBt = ldlt.solve(Eigen::MatrixXd(Bd.transpose()));
    Eigen::MatrixXd S = Bd * GinvBt;
    Eigen::MatrixXd Gq = Eigen::MatrixXd(sys.qnorm_weight.asDiagonal());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Gq);
    double lmin = es.eigenvalues().minCoeff();
    return lmin > 0 ? std::sqrt(lmin) : 0.0;
}

} // namespace mdfrac
