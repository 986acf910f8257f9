#pragma once

#include "mdfrac/assembly.hpp"
#include "mdfrac/presets.hpp"

#include <vector>

namespace mdfrac::testing {

/// Rectangle [0,1]x[0,1] fanned from (0,1), with a one-sided fracture along
/// y = 0 whose trace partition and mortar partition are prescribed. Used to
/// probe the mortar projection against hand-computed overlaps.
inline MixedDimMesh strip_mesh(const std::vector<double>& trace_nodes,
                               const std::vector<double>& mortar_nodes) {
    MixedDimMesh mesh;
    mesh.ambient_dim = 2;
    mesh.preset = "strip";

    Subdomain mat;
    mat.dim = 2;
    mat.id = 1;
    int nt = int(trace_nodes.size());
    mat.vertices_ambient.resize(2, nt + 2);
    for (int i = 0; i < nt; ++i) mat.vertices_ambient.col(i) = Vec2(trace_nodes[i], 0.0);
    mat.vertices_ambient.col(nt) = Vec2(0, 1);
    mat.vertices_ambient.col(nt + 1) = Vec2(1, 1);
    mat.vertices_local = mat.vertices_ambient;
    mat.frame_origin = Vec2(0, 0);
    mat.frame_tangents = Eigen::Matrix2d::Identity();
    for (int i = 0; i + 1 < nt; ++i) mat.cells.push_back({i, i + 1, nt});
    mat.cells.push_back({nt - 1, nt + 1, nt});
    mesh.subdomains.push_back(std::move(mat));

    Subdomain fr;
    fr.id = 1;
    fr.dim = 1;
    int nm = int(mortar_nodes.size());
    fr.vertices_ambient.resize(2, nm);
    fr.vertices_local.resize(1, nm);
    for (int i = 0; i < nm; ++i) {
        fr.vertices_ambient.col(i) = Vec2(mortar_nodes[i], 0.0);
        fr.vertices_local(0, i) = mortar_nodes[i];
    }
    fr.frame_origin = Vec2(0, 0);
    fr.frame_tangents = Vec2(1, 0);
    for (int i = 0; i + 1 < nm; ++i) fr.cells.push_back({i, i + 1});
    mesh.subdomains.push_back(std::move(fr));

    mesh.finalize();
    Subdomain& m = mesh.subdomains[0];
    m.facet_tags.assign(m.n_facets(), FacetTag::Interior);
    Interface itf;
    itf.dim = 1;
    itf.lower_id = 1;
    itf.side = 0;
    itf.upper_id = 1;
    itf.nu = Vec2(0, -1);
    for (int f = 0; f < m.n_facets(); ++f) {
        if (m.facet_cell[f][1] >= 0) continue;
        if (std::abs(m.facet_centroid_ambient(f)(1)) < 1e-12) {
            m.facet_tags[f] = FacetTag::Interface;
            itf.upper_facets.push_back(f);
        } else {
            m.facet_tags[f] = FacetTag::Dirichlet;
        }
    }
    Subdomain& f1 = mesh.subdomains[1];
    f1.facet_tags.assign(f1.n_facets(), FacetTag::Interior);
    f1.facet_tags[f1.facet_index({0})] = FacetTag::Neumann;
    f1.facet_tags[f1.facet_index({nm - 1})] = FacetTag::Neumann;
    mesh.interfaces.push_back(std::move(itf));
    mesh.finalize();
    return mesh;
}

inline ParameterTable strip_params(double K_frac = 1.0, double K_nu = 1.0, double gamma = 0.01) {
    ParameterTable t;
    t.features[{2, 1}] = FeatureParams{1.0, 1.0, GammaLaw::constant(1.0)};
    t.features[{1, 1}] = FeatureParams{K_frac, K_nu, GammaLaw::constant(gamma)};
    return t;
}

/// Star of four unit fracture segments meeting at the origin, coupled only
/// through the 0-d subdomain (no surrounding matrix).
inline MixedDimMesh star_mesh() {
    MixedDimMesh mesh;
    mesh.ambient_dim = 2;
    mesh.preset = "star";
    const Vec2 dirs[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int i = 0; i < 4; ++i) {
        Subdomain s;
        s.dim = 1;
        s.id = i + 1;
        s.vertices_ambient.resize(2, 2);
        s.vertices_ambient.col(0) = Vec2(0, 0);
        s.vertices_ambient.col(1) = dirs[i];
        s.vertices_local.resize(1, 2);
        s.vertices_local << 0, 1;
        s.frame_origin = Vec2(0, 0);
        s.frame_tangents = dirs[i];
        s.cells = {{0, 1}};
        mesh.subdomains.push_back(std::move(s));
    }
    Subdomain pt;
    pt.dim = 0;
    pt.id = 1;
    pt.vertices_ambient.resize(2, 1);
    pt.vertices_ambient.col(0) = Vec2(0, 0);
    pt.vertices_local.resize(0, 1);
    pt.frame_origin = Vec2(0, 0);
    pt.frame_tangents.resize(2, 0);
    pt.cells = {{0}};
    mesh.subdomains.push_back(std::move(pt));

    mesh.finalize();
    for (int i = 0; i < 4; ++i) {
        Subdomain& s = mesh.subdomains[i];
        s.facet_tags.assign(s.n_facets(), FacetTag::Interior);
        s.facet_tags[s.facet_index({0})] = FacetTag::Interface;
        s.facet_tags[s.facet_index({1})] = FacetTag::Dirichlet;
        Interface itf;
        itf.dim = 0;
        itf.lower_id = 1;
        itf.side = i;
        itf.upper_id = i + 1;
        itf.nu = Vec2(-mesh.subdomains[i].frame_tangents.col(0));
        itf.upper_facets.push_back(s.facet_index({0}));
        mesh.interfaces.push_back(std::move(itf));
    }
    mesh.finalize();
    return mesh;
}

} // namespace mdfrac::testing
