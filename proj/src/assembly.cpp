#include "mdfrac/assembly.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace mdfrac {

namespace {

int worker_count(int requested, int tasks) {
    int n = requested;
    if (n <= 0) {
        if (const char* env = std::getenv("MDFRAC_THREADS")) n = std::atoi(env);
    }
    if (n <= 0) n = int(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    return std::min(n, std::max(1, tasks));
}

/// Run f(i) for i in [0, n); results must be written to disjoint slots so
/// the outcome is identical for any worker count.
void parallel_for(int n, int threads, const std::function<void(int)>& f) {
    int w = worker_count(threads, n);
    if (w <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mx;
    for (int t = 0; t < w; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mx);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

struct CellGeometry {
    std::vector<VecX> verts;
    std::vector<double> sign;  // +1 if the global facet normal is outward
    std::vector<double> fmeas; // facet measures, order: facet opposite vertex k
    std::vector<int> dofs;     // full-flux dof per facet (-1 eliminated)
    std::vector<int> facet_ids;
};

CellGeometry cell_geometry(const Subdomain& s, const DofLayout& layout, int si, int c) {
    CellGeometry g;
    const auto& cell = s.cells[c];
    for (int v : cell) g.verts.push_back(s.vertices_local.col(v));
    for (size_t drop = 0; drop < cell.size(); ++drop) {
        std::vector<int> fv;
        for (size_t k = 0; k < cell.size(); ++k)
            if (k != drop) fv.push_back(cell[k]);
        int fi = s.facet_index(fv);
        g.facet_ids.push_back(fi);
        g.fmeas.push_back(s.facet_measure[fi]);
        g.dofs.push_back(layout.flux_index[si][fi]);
        VecX outward = facet_outward_normal(g.verts, int(drop));
        g.sign.push_back(outward.dot(s.facet_normal[fi]) > 0 ? 1.0 : -1.0);
    }
    return g;
}

} // namespace

MatX local_rt0_mass(const std::vector<VecX>& verts, const MatX& K_inv,
                    const std::vector<double>& sign, const std::vector<double>& facet_meas) {
    const int d = int(verts.size()) - 1;
    const double vol = simplex_measure(verts);
    VecX xbar = centroid(verts);
    // second moment sum_k int x x^T
    MatX m2 = MatX::Zero(d, d);
    VecX vsum = VecX::Zero(d);
    for (const auto& v : verts) {
        m2 += v * v.transpose();
        vsum += v;
    }
    m2 = (m2 + vsum * vsum.transpose()) * (vol / double((d + 1) * (d + 2)));
    const VecX m1 = vol * xbar;

    MatX M(d + 1, d + 1);
    for (int i = 0; i <= d; ++i) {
        double ci = sign[i] * facet_meas[i] / (d * vol);
        for (int j = i; j <= d; ++j) {
            double cj = sign[j] * facet_meas[j] / (d * vol);
            // int (x - q_i)^T Kinv (x - q_j)
            double v = (K_inv * m2).trace() - verts[i].dot(K_inv * m1) -
                       m1.dot(K_inv * verts[j]) + vol * verts[i].dot(K_inv * verts[j]);
            M(i, j) = M(j, i) = ci * cj * v;
        }
    }
    return M;
}

SparseOperator assemble_flux_mass(const MixedDimMesh& mesh, const ScalingFields& fields,
                                  const DofLayout& layout, int dim, int id) {
    int si = mesh.subdomain_index(dim, id);
    const Subdomain& s = mesh.subdomains[si];
    SparseOperator op;
    op.domain = op.codomain = "flux";
    std::vector<Triplet> trip;
    for (int c = 0; c < s.n_cells(); ++c) {
        CellGeometry g = cell_geometry(s, layout, si, c);
        MatX K_inv = fields.sub[si].K[c].inverse();
        MatX M = local_rt0_mass(g.verts, K_inv, g.sign, g.fmeas);
        for (int i = 0; i <= dim; ++i)
            for (int j = 0; j <= dim; ++j) {
                if (g.dofs[i] < 0 || g.dofs[j] < 0) continue;
                trip.emplace_back(g.dofs[i], g.dofs[j], M(i, j));
            }
    }
    op.mat.resize(layout.n_flux, layout.n_flux);
    op.mat.setFromTriplets(trip.begin(), trip.end());
    op.finalize();
    return op;
}

SparseOperator assemble_div(const MixedDimMesh& mesh, const ScalingFields& fields,
                            const DofLayout& layout, int dim, int id) {
    int si = mesh.subdomain_index(dim, id);
    const Subdomain& s = mesh.subdomains[si];
    SparseOperator op;
    op.domain = "flux";
    op.codomain = "pressure";
    std::vector<Triplet> trip;
    for (int c = 0; c < s.n_cells(); ++c) {
        CellGeometry g = cell_geometry(s, layout, si, c);
        double eps = fields.sub[si].eps_mid[c];
        const VecX& grad = fields.sub[si].grad_eps[c];
        VecX xbar = centroid(g.verts);
        for (int i = 0; i <= dim; ++i) {
            if (g.dofs[i] < 0) continue;
            // int_c div(eps phi_i) = s |F| (eps(xbar) + grad eps . (xbar - q_i)/d)
            double v = g.sign[i] * g.fmeas[i] * (eps + grad.dot(xbar - g.verts[i]) / dim);
            trip.emplace_back(layout.pressure_offset[si] + c, g.dofs[i], v);
        }
    }
    op.mat.resize(layout.n_pressure, layout.n_flux);
    op.mat.setFromTriplets(trip.begin(), trip.end());
    op.finalize();
    return op;
}

std::pair<SparseOperator, SparseOperator> assemble_mortar_terms(const MixedDimMesh& mesh,
                                                                const ScalingFields& fields,
                                                                const DofLayout& layout,
                                                                int interface_index) {
    const Interface& itf = mesh.interfaces[interface_index];
    const Subdomain& lo = mesh.subdomain(itf.dim, itf.lower_id);
    int lsi = mesh.subdomain_index(itf.dim, itf.lower_id);
    const auto& sc = fields.itf[interface_index];
    SparseOperator mass, jump;
    mass.domain = mass.codomain = "mortar";
    jump.domain = "mortar";
    jump.codomain = "pressure";
    std::vector<Triplet> tm, tj;
    for (int c = 0; c < lo.n_cells(); ++c) {
        if (sc.K_nu[c] <= 0) throw std::runtime_error("non-positive normal permeability");
        int dof = layout.lambda_offset[interface_index] + c;
        tm.emplace_back(dof, dof, lo.cell_measure[c] * sc.gamma[c] / sc.K_nu[c]);
        tj.emplace_back(layout.pressure_offset[lsi] + c, dof,
                        -sc.eps_hat[c] * lo.cell_measure[c]);
    }
    mass.mat.resize(layout.n_lambda, layout.n_lambda);
    mass.mat.setFromTriplets(tm.begin(), tm.end());
    mass.finalize();
    jump.mat.resize(layout.n_pressure, layout.n_lambda);
    jump.mat.setFromTriplets(tj.begin(), tj.end());
    jump.finalize();
    return {std::move(mass), std::move(jump)};
}

SpMat SaddleSystem::full_matrix() const {
    const int nu = layout->n_u0, nl = layout->n_lambda, np = layout->n_pressure;
    std::vector<Triplet> trip;
    auto insert = [&](const SpMat& m, int r0, int c0) {
        for (int k = 0; k < m.outerSize(); ++k)
            for (SpMat::InnerIterator it(m, k); it; ++it)
                trip.emplace_back(int(it.row()) + r0, int(it.col()) + c0, it.value());
    };
    insert(A_uu, 0, 0);
    insert(A_ul, 0, nu);
    insert(SpMat(A_ul.transpose()), nu, 0);
    insert(A_ll, nu, nu);
    insert(B_u, nu + nl, 0);
    insert(SpMat(B_u.transpose()), 0, nu + nl);
    insert(B_l, nu + nl, nu);
    insert(SpMat(B_l.transpose()), nu, nu + nl);
    SpMat full(nu + nl + np, nu + nl + np);
    full.setFromTriplets(trip.begin(), trip.end());
    full.makeCompressed();
    return full;
}

VecX SaddleSystem::full_rhs() const {
    VecX rhs(layout->n_total());
    rhs << r_u, r_l, r_p;
    return rhs;
}

namespace {

// Sparse products of symmetric factors are symmetric only in exact
// arithmetic; mirror the upper triangle so stored pairs are bit-identical.
SpMat symmetrize_from_upper(const SpMat& m) {
    std::vector<Triplet> trip;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it) {
            if (it.row() > it.col()) continue;
            trip.emplace_back(int(it.row()), int(it.col()), it.value());
            if (it.row() != it.col()) trip.emplace_back(int(it.col()), int(it.row()), it.value());
        }
    SpMat out(m.rows(), m.cols());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

} // namespace

SaddleSystem assemble_system(const ProblemSpec& problem, const DofLayout& layout,
                             const SpMat* extension_override) {
    const MixedDimMesh& mesh = *problem.mesh;
    const ScalingFields& fields = *problem.fields;
    const int nsub = int(mesh.subdomains.size());
    const int nitf = int(mesh.interfaces.size());

    // every top-dimensional subdomain needs a Dirichlet boundary
    for (const auto& s : mesh.subdomains) {
        if (s.dim != mesh.ambient_dim) continue;
        bool has = false;
        for (auto t : s.facet_tags)
            if (t == FacetTag::Dirichlet) has = true;
        if (!has) throw std::runtime_error("empty Dirichlet set on a top-dimensional subdomain");
    }

    // per-subdomain local operators, assembled in parallel, merged in order
    std::vector<SparseOperator> mass_ops(nsub), div_ops(nsub);
    parallel_for(nsub, problem.solver.threads, [&](int si) {
        const Subdomain& s = mesh.subdomains[si];
        if (s.dim == 0) return;
        mass_ops[si] = assemble_flux_mass(mesh, fields, layout, s.dim, s.id);
        div_ops[si] = assemble_div(mesh, fields, layout, s.dim, s.id);
    });
    std::vector<std::pair<SparseOperator, SparseOperator>> mortar_ops(nitf);
    parallel_for(nitf, problem.solver.threads,
                 [&](int ii) { mortar_ops[ii] = assemble_mortar_terms(mesh, fields, layout, ii); });

    SpMat M(layout.n_flux, layout.n_flux), D(layout.n_pressure, layout.n_flux);
    SpMat Mort(layout.n_lambda, layout.n_lambda), J(layout.n_pressure, layout.n_lambda);
    for (int si = 0; si < nsub; ++si) {
        if (mesh.subdomains[si].dim == 0) continue;
        M += mass_ops[si].mat;
        D += div_ops[si].mat;
    }
    for (int ii = 0; ii < nitf; ++ii) {
        Mort += mortar_ops[ii].first.mat;
        J += mortar_ops[ii].second.mat;
    }

    SaddleSystem sys;
    sys.layout = &layout;
    sys.extension = extension_override ? *extension_override : extension_matrix(mesh, layout).mat;
    sys.injection = interior_injection(layout).mat;
    sys.divergence = D;
    sys.jump_weighted = J;

    const SpMat& E = sys.extension;
    const SpMat& P = sys.injection;
    SpMat MP = M * P, ME = M * E;
    sys.A_uu = symmetrize_from_upper(SpMat(P.transpose() * MP));
    sys.A_ul = SpMat(P.transpose() * ME);
    sys.A_ll = symmetrize_from_upper(SpMat(E.transpose() * ME)) + Mort;
    // pressure rows are the negated conservation equation
    sys.B_u = SpMat(-(D * P));
    sys.B_l = SpMat(-(D * E) - J);

    // right-hand side
    sys.r_u = VecX::Zero(layout.n_u0);
    sys.r_l = VecX::Zero(layout.n_lambda);
    sys.r_p = VecX::Zero(layout.n_pressure);
    sys.cell_measures = VecX::Zero(layout.n_pressure);
    sys.qnorm_weight = VecX::Zero(layout.n_pressure);

    for (int si = 0; si < nsub; ++si) {
        const Subdomain& s = mesh.subdomains[si];
        for (int c = 0; c < s.n_cells(); ++c) {
            int pdof = layout.pressure_offset[si] + c;
            double eps = fields.sub[si].eps_mid[c];
            double ehm = fields.sub[si].eps_hat_max[c];
            VecX x = s.cell_centroid_ambient(c);
            sys.r_p(pdof) = -s.cell_measure[c] * eps * eps * problem.data.source(x, s.dim);
            sys.cell_measures(pdof) = s.cell_measure[c];
            sys.qnorm_weight(pdof) = s.cell_measure[c] * ehm * ehm;
        }
        // Dirichlet data enters weakly through the flux test functions
        for (int f = 0; f < s.n_facets(); ++f) {
            if (s.facet_tags[f] != FacetTag::Dirichlet) continue;
            int dof = layout.flux_index[si][f];
            int u0 = layout.u0_index[dof];
            if (u0 < 0) throw std::runtime_error("Dirichlet facet in the trace block");
            // facet-average of g, times the linear reconstruction of eps
            int c = s.facet_cell[f][0];
            double eps0 = fields.sub[si].eps_mid[c];
            const VecX& grad = fields.sub[si].grad_eps[c];
            const VecX& xc = s.cell_centroid_local[c];
            std::vector<VecX> fverts;
            for (int v : s.facets[f]) fverts.push_back(s.vertices_local.col(v));
            auto quad = simplex_quadrature(fverts, 4);
            double r = 0;
            for (size_t q = 0; q < quad.points.size(); ++q) {
                double eps_q = eps0 + grad.dot(quad.points[q] - xc);
                r += quad.weights[q] * eps_q * problem.data.dirichlet(s.to_ambient(quad.points[q]));
            }
            sys.r_u(u0) -= r; // phi . nu = +1 on an owner-outward boundary facet
        }
    }
    return sys;
}

} // namespace mdfrac
