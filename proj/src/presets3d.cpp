#include "mdfrac/presets.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

// Structured construction of the three-plane cube: 8 subcubes split by the
// planes x1 = x2 = x3 = 0.5 into 12 quarter-planes, 6 half-lines and the
// center point. All grids are matching (Freudenthal tetrahedra trace to the
// main-diagonal triangle split on every axis plane).

namespace mdfrac {
namespace detail {

namespace {

int cube_id(int i, int j, int k) { return 1 + i + 2 * j + 4 * k; }

// quarter-plane id for normal axis a and quarter bits over the in-plane axes
int plane_id(int a, int q_first, int q_second) { return 4 * a + 2 * q_first + q_second + 1; }

int line_id(int axis, int half) { return 2 * axis + half + 1; }

void inplane_axes(int a, int& b, int& c) {
    b = (a == 0) ? 1 : 0;
    c = (a == 2) ? 1 : 2;
    if (b > c) std::swap(b, c);
}

} // namespace

MixedDimMesh build_cube3d_level0(const MeshOptions& opt) {
    MixedDimMesh mesh;
    mesh.ambient_dim = 3;
    mesh.preset = "cube3d";
    mesh.clip_3d_mortars = opt.clip_3d_mortars;
    const int m = 1; // cells per direction per subcube at level 0
    const double h = 0.5 / m;

    auto near = [](double x, double v) { return std::abs(x - v) < 1e-12; };

    // -- subcubes ------------------------------------------------------------
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 2; ++i) {
                Subdomain s;
                s.dim = 3;
                s.id = cube_id(i, j, k);
                const double lo[3] = {0.5 * i, 0.5 * j, 0.5 * k};
                auto vid = [&](int a, int b, int c) { return a + (m + 1) * (b + (m + 1) * c); };
                s.vertices_ambient.resize(3, (m + 1) * (m + 1) * (m + 1));
                for (int c = 0; c <= m; ++c)
                    for (int b = 0; b <= m; ++b)
                        for (int a = 0; a <= m; ++a)
                            s.vertices_ambient.col(vid(a, b, c)) =
                                Vec3(lo[0] + h * a, lo[1] + h * b, lo[2] + h * c);
                s.vertices_local = s.vertices_ambient;
                s.frame_origin = Vec3(0, 0, 0);
                s.frame_tangents = Eigen::Matrix3d::Identity();
                for (int c = 0; c < m; ++c)
                    for (int b = 0; b < m; ++b)
                        for (int a = 0; a < m; ++a) {
                            int base[3] = {a, b, c};
                            for (auto& p : perms) {
                                int cur[3] = {base[0], base[1], base[2]};
                                std::vector<int> tet;
                                tet.push_back(vid(cur[0], cur[1], cur[2]));
                                for (int step = 0; step < 3; ++step) {
                                    cur[p[step]] += 1;
                                    tet.push_back(vid(cur[0], cur[1], cur[2]));
                                }
                                s.cells.push_back(tet);
                            }
                        }
                mesh.subdomains.push_back(std::move(s));
            }

    // -- quarter planes --------------------------------------------------------
    for (int a = 0; a < 3; ++a) {
        int b, c;
        inplane_axes(a, b, c);
        for (int qb = 0; qb < 2; ++qb)
            for (int qc = 0; qc < 2; ++qc) {
                Subdomain s;
                s.dim = 2;
                s.id = plane_id(a, qb, qc);
                const double lob = 0.5 * qb, loc = 0.5 * qc;
                auto vid = [&](int u, int v) { return u + (m + 1) * v; };
                s.vertices_ambient.resize(3, (m + 1) * (m + 1));
                s.vertices_local.resize(2, (m + 1) * (m + 1));
                for (int v = 0; v <= m; ++v)
                    for (int u = 0; u <= m; ++u) {
                        Vec3 p;
                        p(a) = 0.5;
                        p(b) = lob + h * u;
                        p(c) = loc + h * v;
                        s.vertices_ambient.col(vid(u, v)) = p;
                        s.vertices_local.col(vid(u, v)) = Vec2(p(b), p(c));
                    }
                Vec3 origin = Vec3::Zero();
                origin(a) = 0.5;
                s.frame_origin = origin;
                s.frame_tangents.resize(3, 2);
                s.frame_tangents.setZero();
                s.frame_tangents(b, 0) = 1;
                s.frame_tangents(c, 1) = 1;
                for (int v = 0; v < m; ++v)
                    for (int u = 0; u < m; ++u) {
                        // main-diagonal split, matching the tetrahedral trace
                        s.cells.push_back({vid(u, v), vid(u + 1, v), vid(u + 1, v + 1)});
                        s.cells.push_back({vid(u, v), vid(u + 1, v + 1), vid(u, v + 1)});
                    }
                mesh.subdomains.push_back(std::move(s));
            }
    }

    // -- half lines --------------------------------------------------------------
    for (int axis = 0; axis < 3; ++axis)
        for (int half = 0; half < 2; ++half) {
            Subdomain s;
            s.dim = 1;
            s.id = line_id(axis, half);
            s.vertices_ambient.resize(3, m + 1);
            s.vertices_local.resize(1, m + 1);
            for (int u = 0; u <= m; ++u) {
                Vec3 p(0.5, 0.5, 0.5);
                p(axis) = 0.5 * half + h * u;
                s.vertices_ambient.col(u) = p;
                s.vertices_local(0, u) = h * u;
            }
            Vec3 origin(0.5, 0.5, 0.5);
            origin(axis) = 0.5 * half;
            s.frame_origin = origin;
            s.frame_tangents.resize(3, 1);
            s.frame_tangents.setZero();
            s.frame_tangents(axis, 0) = 1;
            for (int u = 0; u < m; ++u) s.cells.push_back({u, u + 1});
            mesh.subdomains.push_back(std::move(s));
        }

    // -- center point ---------------------------------------------------------------
    {
        Subdomain s;
        s.dim = 0;
        s.id = 1;
        s.vertices_ambient.resize(3, 1);
        s.vertices_ambient.col(0) = Vec3(0.5, 0.5, 0.5);
        s.vertices_local.resize(0, 1);
        s.frame_origin = Vec3(0.5, 0.5, 0.5);
        s.frame_tangents.resize(3, 0);
        s.cells = {{0}};
        mesh.subdomains.push_back(std::move(s));
    }

    mesh.finalize();

    // -- facet tags -------------------------------------------------------------
    for (auto& s : mesh.subdomains) {
        if (s.dim == 0) continue;
        s.facet_tags.assign(s.n_facets(), FacetTag::Interior);
        for (int f = 0; f < s.n_facets(); ++f) {
            if (s.facet_cell[f][1] >= 0) continue;
            VecX cen = s.facet_centroid_ambient(f);
            if (s.dim == 3) {
                bool iface = false;
                for (int a = 0; a < 3; ++a)
                    if (near(cen(a), 0.5)) iface = true;
                if (iface) s.facet_tags[f] = FacetTag::Interface;
                else if (near(cen(2), 0.0) || near(cen(2), 1.0)) s.facet_tags[f] = FacetTag::Dirichlet;
                else s.facet_tags[f] = FacetTag::Neumann;
            } else if (s.dim == 2) {
                int a = -1;
                for (int ax = 0; ax < 3; ++ax)
                    if (near(s.frame_origin(ax), 0.5) && s.frame_tangents.row(ax).isZero(1e-14))
                        a = ax;
                int b, c;
                inplane_axes(a, b, c);
                if (near(cen(b), 0.5) || near(cen(c), 0.5)) s.facet_tags[f] = FacetTag::Interface;
                else if (near(cen(2), 0.0) || near(cen(2), 1.0)) s.facet_tags[f] = FacetTag::Dirichlet;
                else s.facet_tags[f] = FacetTag::Neumann;
            } else {
                // line endpoints: center -> interface, domain boundary otherwise
                bool center = near(cen(0), 0.5) && near(cen(1), 0.5) && near(cen(2), 0.5);
                if (center) s.facet_tags[f] = FacetTag::Interface;
                else if (near(cen(2), 0.0) || near(cen(2), 1.0)) s.facet_tags[f] = FacetTag::Dirichlet;
                else s.facet_tags[f] = FacetTag::Neumann;
            }
        }
    }

    // -- interfaces -----------------------------------------------------------------
    // plane-cube
    for (int a = 0; a < 3; ++a) {
        int b, c;
        inplane_axes(a, b, c);
        for (int qb = 0; qb < 2; ++qb)
            for (int qc = 0; qc < 2; ++qc)
                for (int side = 0; side < 2; ++side) {
                    int bits[3];
                    bits[a] = side;
                    bits[b] = qb;
                    bits[c] = qc;
                    Interface itf;
                    itf.dim = 2;
                    itf.lower_id = plane_id(a, qb, qc);
                    itf.side = side;
                    itf.upper_id = cube_id(bits[0], bits[1], bits[2]);
                    Vec3 nu = Vec3::Zero();
                    nu(a) = side == 0 ? 1.0 : -1.0;
                    itf.nu = nu;
                    const Subdomain& up = mesh.subdomain(3, itf.upper_id);
                    for (int f = 0; f < up.n_facets(); ++f)
                        if (up.facet_tags[f] == FacetTag::Interface &&
                            near(up.facet_centroid_ambient(f)(a), 0.5))
                            itf.upper_facets.push_back(f);
                    mesh.interfaces.push_back(std::move(itf));
                }
    }
    // line-plane: for line (axis l, half hf) the four planes with normal a != l
    for (int l = 0; l < 3; ++l)
        for (int hf = 0; hf < 2; ++hf) {
            int side = 0;
            for (int a = 0; a < 3; ++a) {
                if (a == l) continue;
                int a2 = 3 - a - l; // the second in-plane axis, fixed at 0.5
                for (int q2 = 0; q2 < 2; ++q2) {
                    int b, c;
                    inplane_axes(a, b, c);
                    int qb = (b == l) ? hf : q2;
                    int qc = (c == l) ? hf : q2;
                    Interface itf;
                    itf.dim = 1;
                    itf.lower_id = line_id(l, hf);
                    itf.side = side++;
                    itf.upper_id = plane_id(a, qb, qc);
                    Vec3 nu = Vec3::Zero();
                    nu(a2) = q2 == 0 ? 1.0 : -1.0;
                    itf.nu = nu;
                    const Subdomain& up = mesh.subdomain(2, itf.upper_id);
                    for (int f = 0; f < up.n_facets(); ++f)
                        if (up.facet_tags[f] == FacetTag::Interface &&
                            near(up.facet_centroid_ambient(f)(a2), 0.5))
                            itf.upper_facets.push_back(f);
                    if (itf.upper_facets.empty())
                        throw std::runtime_error("line interface without facets");
                    mesh.interfaces.push_back(std::move(itf));
                }
            }
        }
    // point-line
    {
        int side = 0;
        for (int l = 0; l < 3; ++l)
            for (int hf = 0; hf < 2; ++hf) {
                Interface itf;
                itf.dim = 0;
                itf.lower_id = 1;
                itf.side = side++;
                itf.upper_id = line_id(l, hf);
                Vec3 nu = Vec3::Zero();
                nu(l) = hf == 0 ? 1.0 : -1.0;
                itf.nu = nu;
                const Subdomain& up = mesh.subdomain(1, itf.upper_id);
                for (int f = 0; f < up.n_facets(); ++f)
                    if (up.facet_tags[f] == FacetTag::Interface) itf.upper_facets.push_back(f);
                mesh.interfaces.push_back(std::move(itf));
            }
    }

    mesh.finalize();
    return mesh;
}

} // namespace detail
} // namespace mdfrac
