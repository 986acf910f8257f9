#include "mdfrac/scaling.hpp"

#include <cmath>
#include <stdexcept>

namespace mdfrac {

double GammaLaw::eval(double s) const {
    if (kind == Kind::Constant) return value;
    double t = std::max(s - s0, 0.0);
    return coef * std::pow(scale * t, power);
}

double GammaLaw::deriv(double s) const {
    if (kind == Kind::Constant) return 0.0;
    double t = std::max(s - s0, 0.0);
    if (t == 0.0) return 0.0;
    return coef * power * scale * std::pow(scale * t, power - 1.0);
}

const FeatureParams& ParameterTable::at(int dim, int id) const {
    auto it = features.find({dim, id});
    if (it == features.end())
        throw std::runtime_error("parameter table missing feature (" + std::to_string(dim) + "," +
                                 std::to_string(id) + ")");
    return it->second;
}

namespace {

double eps_from_gamma(double gamma, double p) {
    if (gamma < 0) throw std::runtime_error("negative aperture");
    return std::pow(2.0 * gamma, p);
}

// d(eps)/ds via the chain rule; guarded at gamma = 0 where the power law
// stays finite for p*power >= 1 (true for the shipped laws).
double deps_ds(const GammaLaw& law, double s, double p) {
    double g = law.eval(s);
    double dg = law.deriv(s);
    if (dg == 0.0) return 0.0;
    if (g <= 0.0) return 0.0;
    return p * std::pow(2.0 * g, p - 1.0) * 2.0 * dg;
}

} // namespace

ScalingFields attach_scaling(const MixedDimMesh& mesh, const ParameterTable& params) {
    const int n = mesh.ambient_dim;
    ScalingFields out;
    out.sub.resize(mesh.subdomains.size());
    out.itf.resize(mesh.interfaces.size());

    for (size_t si = 0; si < mesh.subdomains.size(); ++si) {
        const Subdomain& s = mesh.subdomains[si];
        SubdomainScaling& f = out.sub[si];
        const FeatureParams& fp = params.at(s.dim, s.id);
        if (fp.K <= 0) throw std::runtime_error("non-SPD permeability K");
        double p = params.eps_power_override > 0 ? params.eps_power_override
                                                 : 0.5 * double(n - s.dim);

        const int nc = s.n_cells();
        f.eps_mid.resize(nc);
        f.grad_eps.resize(nc);
        f.eps_e.resize(nc);
        f.eps_hat_max.assign(nc, 0.0);
        f.K.resize(nc);
        for (int c = 0; c < nc; ++c) {
            f.K[c] = fp.K * MatX::Identity(s.dim, s.dim);
            if (s.dim == n) {
                f.eps_mid[c] = 1.0;
                f.grad_eps[c] = VecX::Zero(s.dim);
                f.eps_e[c] = 1.0;
                f.eps_hat_max[c] = 1.0;
                continue;
            }
            if (s.dim == 0) {
                double g = fp.gamma.eval(0.0);
                f.eps_mid[c] = eps_from_gamma(g, p);
                f.grad_eps[c] = VecX::Zero(0);
                f.eps_e[c] = f.eps_mid[c];
                continue;
            }
            double smid = s.cell_centroid_local[c](0);
            f.eps_mid[c] = eps_from_gamma(fp.gamma.eval(smid), p);
            VecX g = VecX::Zero(s.dim);
            g(0) = deps_ds(fp.gamma, smid, p);
            f.grad_eps[c] = g;
            // sup over the cell: the laws are monotone between breakpoints
            double e = f.eps_mid[c];
            for (int v : s.cells[c])
                e = std::max(e, eps_from_gamma(fp.gamma.eval(s.vertices_local(0, v)), p));
            f.eps_e[c] = e;
        }
    }

    for (size_t ii = 0; ii < mesh.interfaces.size(); ++ii) {
        const Interface& itf = mesh.interfaces[ii];
        InterfaceScaling& f = out.itf[ii];
        const Subdomain& lo = mesh.subdomain(itf.dim, itf.lower_id);
        const Subdomain& up = mesh.subdomain(itf.dim + 1, itf.upper_id);
        const FeatureParams& fp_lo = params.at(lo.dim, lo.id);
        if (fp_lo.K_nu <= 0) throw std::runtime_error("non-positive normal permeability");
        double p_up = params.eps_power_override > 0 ? params.eps_power_override
                                                    : 0.5 * double(n - up.dim);
        const FeatureParams* fp_up = up.dim == n ? nullptr : &params.at(up.dim, up.id);

        const int nc = lo.n_cells();
        f.gamma.resize(nc);
        f.K_nu.assign(nc, fp_lo.K_nu);
        f.eps_hat.resize(nc);
        for (int c = 0; c < nc; ++c) {
            double smid = lo.dim == 0 ? 0.0 : lo.cell_centroid_local[c](0);
            f.gamma[c] = fp_lo.gamma.eval(smid);
            if (f.gamma[c] < 0) throw std::runtime_error("negative aperture");
            if (up.dim == n) {
                f.eps_hat[c] = 1.0;
            } else {
                // trace of the upper subdomain's eps at the mortar cell center
                VecX amb = lo.dim == 0 ? lo.vertices_ambient.col(0)
                                       : VecX(lo.to_ambient(lo.cell_centroid_local[c]));
                double s_up = up.frame_tangents.col(0).dot(amb - up.frame_origin);
                f.eps_hat[c] = eps_from_gamma(fp_up->gamma.eval(s_up), p_up);
            }
        }
    }

    // eps_hat_max per lower-dimensional cell, skipping zero-aperture sides
    for (size_t ii = 0; ii < mesh.interfaces.size(); ++ii) {
        const Interface& itf = mesh.interfaces[ii];
        int si = mesh.subdomain_index(itf.dim, itf.lower_id);
        auto& ehm = out.sub[si].eps_hat_max;
        for (size_t c = 0; c < ehm.size(); ++c)
            if (out.itf[ii].eps_hat[c] > 0.0) ehm[c] = std::max(ehm[c], out.itf[ii].eps_hat[c]);
    }
    for (size_t si = 0; si < mesh.subdomains.size(); ++si) {
        const Subdomain& s = mesh.subdomains[si];
        if (s.dim == n) continue;
        for (double v : out.sub[si].eps_hat_max)
            if (v <= 0.0)
                throw std::runtime_error("eps_hat_max vanished on subdomain (" +
                                         std::to_string(s.dim) + "," + std::to_string(s.id) + ")");
    }
    return out;
}

GradientBoundReport validate_gradient_bound(const MixedDimMesh& mesh, const ScalingFields& fields,
                                            double constant) {
    GradientBoundReport rep;
    for (size_t si = 0; si < mesh.subdomains.size(); ++si) {
        const Subdomain& s = mesh.subdomains[si];
        if (s.dim == 0 || s.dim == mesh.ambient_dim) continue;
        const auto& f = fields.sub[si];
        std::vector<double> ratio(s.n_cells(), 0.0);
        for (int c = 0; c < s.n_cells(); ++c) {
            double g = f.grad_eps[c].norm();
            if (f.eps_mid[c] > 0)
                ratio[c] = g / std::sqrt(f.eps_mid[c]);
            else
                ratio[c] = g > 0 ? -1.0 : 0.0; // resolve from a neighbor below
        }
        // one-sided values for degenerate cells
        for (int fi = 0; fi < s.n_facets(); ++fi) {
            auto [a, b] = s.facet_cell[fi];
            if (b < 0) continue;
            if (ratio[a] < 0 && ratio[b] >= 0) ratio[a] = ratio[b];
            if (ratio[b] < 0 && ratio[a] >= 0) ratio[b] = ratio[a];
        }
        double m = 0;
        for (double r : ratio) m = std::max(m, r);
        rep.per_subdomain[{s.dim, s.id}] = m;
        rep.max_ratio = std::max(rep.max_ratio, m);
    }
    rep.violated = rep.max_ratio > constant;
    return rep;
}

} // namespace mdfrac
