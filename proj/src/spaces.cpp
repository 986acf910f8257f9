#include "mdfrac/spaces.hpp"

#include <Eigen/Dense>
#include <fstream>
#include <stdexcept>

namespace mdfrac {

void SparseOperator::finalize() {
    mat.prune([](int, int, double v) { return v != 0.0; });
    mat.makeCompressed();
}

DofLayout build_layout(const MixedDimMesh& mesh) {
    DofLayout l;
    l.flux_index.resize(mesh.subdomains.size());
    l.pressure_offset.resize(mesh.subdomains.size());

    // interface lookup: (upper subdomain index, facet) -> trace
    std::map<std::pair<int, int>, int> trace_of; // -> interface index
    for (size_t ii = 0; ii < mesh.interfaces.size(); ++ii) {
        const Interface& itf = mesh.interfaces[ii];
        int usi = mesh.subdomain_index(itf.dim + 1, itf.upper_id);
        for (int f : itf.upper_facets) trace_of[{usi, f}] = int(ii);
    }

    l.trace_dofs.resize(mesh.interfaces.size());
    for (auto& td : l.trace_dofs) td.clear();

    for (size_t si = 0; si < mesh.subdomains.size(); ++si) {
        const Subdomain& s = mesh.subdomains[si];
        auto& dims = l.per_dim[s.dim];
        l.flux_index[si].assign(s.n_facets(), -1);
        for (int f = 0; f < s.n_facets(); ++f) {
            FacetTag t = s.facet_tags[f];
            if (t == FacetTag::Neumann || t == FacetTag::Tip) continue;
            l.flux_index[si][f] = l.n_flux++;
            dims.flux++;
        }
        l.pressure_offset[si] = l.n_pressure;
        l.n_pressure += s.n_cells();
        dims.pressure += s.n_cells();
    }

    l.u0_index.assign(l.n_flux, -1);
    for (size_t si = 0; si < mesh.subdomains.size(); ++si) {
        const Subdomain& s = mesh.subdomains[si];
        for (int f = 0; f < s.n_facets(); ++f) {
            int dof = l.flux_index[si][f];
            if (dof < 0) continue;
            if (s.facet_tags[f] == FacetTag::Interface) continue;
            l.u0_index[dof] = l.n_u0++;
            l.per_dim[s.dim].interior_flux++;
        }
    }

    l.lambda_offset.resize(mesh.interfaces.size());
    for (size_t ii = 0; ii < mesh.interfaces.size(); ++ii) {
        const Interface& itf = mesh.interfaces[ii];
        const Subdomain& lo = mesh.subdomain(itf.dim, itf.lower_id);
        int usi = mesh.subdomain_index(itf.dim + 1, itf.upper_id);
        l.lambda_offset[ii] = l.n_lambda;
        l.n_lambda += lo.n_cells();
        l.per_dim[itf.dim].mortar += lo.n_cells();
        for (int f : itf.upper_facets) {
            int dof = l.flux_index[usi][f];
            if (dof < 0) throw std::runtime_error("interface facet without flux dof");
            l.trace_dofs[ii].push_back(dof);
        }
    }
    return l;
}

SparseOperator mortar_projection(const MixedDimMesh& mesh, int interface_index) {
    const Interface& itf = mesh.interfaces[interface_index];
    const Subdomain& lo = mesh.subdomain(itf.dim, itf.lower_id);
    const Subdomain& up = mesh.subdomain(itf.dim + 1, itf.upper_id);
    SparseOperator op;
    op.domain = "mortar";
    op.codomain = "trace";
    std::vector<Triplet> trip;
    for (size_t k = 0; k < itf.upper_facets.size(); ++k) {
        double fmeas = up.facet_measure[itf.upper_facets[k]];
        for (auto [c, w] : itf.overlaps[k]) trip.emplace_back(int(k), c, w / fmeas);
    }
    op.mat.resize(int(itf.upper_facets.size()), lo.n_cells());
    op.mat.setFromTriplets(trip.begin(), trip.end());
    op.finalize();
    return op;
}

double check_mortar_condition(const MixedDimMesh& mesh, int interface_index) {
    const Interface& itf = mesh.interfaces[interface_index];
    const Subdomain& lo = mesh.subdomain(itf.dim, itf.lower_id);
    const Subdomain& up = mesh.subdomain(itf.dim + 1, itf.upper_id);
    SparseOperator P = mortar_projection(mesh, interface_index);
    Eigen::MatrixXd Pd = Eigen::MatrixXd(P.mat);
    Eigen::VectorXd wf(Pd.rows()), wc(Pd.cols());
    for (size_t k = 0; k < itf.upper_facets.size(); ++k)
        wf(int(k)) = up.facet_measure[itf.upper_facets[k]];
    for (int c = 0; c < lo.n_cells(); ++c) wc(c) = lo.cell_measure[c];
    Eigen::MatrixXd G = Pd.transpose() * wf.asDiagonal() * Pd; // trace-mass Gram
    Eigen::MatrixXd M = wc.asDiagonal();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(G, M);
    double lmin = es.eigenvalues().minCoeff();
    return lmin > 0 ? std::sqrt(lmin) : 0.0;
}

SparseOperator jump_operator(const MixedDimMesh& mesh, const ScalingFields& fields,
                             const DofLayout& layout, int dim, int id) {
    const Subdomain& lo = mesh.subdomain(dim, id);
    SparseOperator op;
    op.domain = "mortar";
    op.codomain = "pressure(" + std::to_string(dim) + "," + std::to_string(id) + ")";
    std::vector<Triplet> trip;
    for (size_t ii = 0; ii < mesh.interfaces.size(); ++ii) {
        const Interface& itf = mesh.interfaces[ii];
        if (itf.dim != dim || itf.lower_id != id) continue;
        for (int c = 0; c < lo.n_cells(); ++c)
            trip.emplace_back(c, layout.lambda_offset[ii] + c, -fields.itf[ii].eps_hat[c]);
    }
    op.mat.resize(lo.n_cells(), layout.n_lambda);
    op.mat.setFromTriplets(trip.begin(), trip.end());
    op.finalize();
    return op;
}

SparseOperator extension_matrix(const MixedDimMesh& mesh, const DofLayout& layout) {
    SparseOperator op;
    op.domain = "mortar";
    op.codomain = "flux";
    std::vector<Triplet> trip;
    for (size_t ii = 0; ii < mesh.interfaces.size(); ++ii) {
        const Interface& itf = mesh.interfaces[ii];
        const Subdomain& up = mesh.subdomain(itf.dim + 1, itf.upper_id);
        for (size_t k = 0; k < itf.upper_facets.size(); ++k) {
            int dof = layout.trace_dofs[ii][k];
            double fmeas = up.facet_measure[itf.upper_facets[k]];
            double sgn = itf.normal_sign[k];
            for (auto [c, w] : itf.overlaps[k])
                trip.emplace_back(dof, layout.lambda_offset[ii] + c, sgn * w / fmeas);
        }
    }
    op.mat.resize(layout.n_flux, layout.n_lambda);
    op.mat.setFromTriplets(trip.begin(), trip.end());
    op.finalize();
    return op;
}

SparseOperator interior_injection(const DofLayout& layout) {
    SparseOperator op;
    op.domain = "u0";
    op.codomain = "flux";
    std::vector<Triplet> trip;
    for (int dof = 0; dof < layout.n_flux; ++dof)
        if (layout.u0_index[dof] >= 0) trip.emplace_back(dof, layout.u0_index[dof], 1.0);
    op.mat.resize(layout.n_flux, layout.n_u0);
    op.mat.setFromTriplets(trip.begin(), trip.end());
    op.finalize();
    return op;
}

void write_matrix_market(const SpMat& mat, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << mat.rows() << " " << mat.cols() << " " << mat.nonZeros() << "\n";
    char buf[64];
    for (int k = 0; k < mat.outerSize(); ++k)
        for (SpMat::InnerIterator it(mat, k); it; ++it) {
            snprintf(buf, sizeof buf, "%d %d %.17g\n", int(it.row()) + 1, int(it.col()) + 1,
                     it.value());
            os << buf;
        }
}

} // namespace mdfrac
