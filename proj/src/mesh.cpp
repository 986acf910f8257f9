#include "mdfrac/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mdfrac {

namespace {

std::vector<VecX> gather_local(const Subdomain& s, const std::vector<int>& verts) {
    std::vector<VecX> v;
    v.reserve(verts.size());
    for (int i : verts) v.push_back(s.vertices_local.col(i));
    return v;
}

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error(what); }

void require(bool ok, const std::string& what) {
    if (!ok) fail(what);
}

} // namespace

VecX Subdomain::to_ambient(const VecX& local) const {
    if (dim == 0) return frame_origin;
    return frame_origin + frame_tangents * local;
}

VecX Subdomain::cell_centroid_ambient(int c) const {
    if (dim == 0) return vertices_ambient.col(0);
    return to_ambient(cell_centroid_local[c]);
}

VecX Subdomain::facet_centroid_ambient(int f) const { return to_ambient(facet_centroid_local[f]); }

VecX Subdomain::facet_normal_ambient(int f) const { return frame_tangents * facet_normal[f]; }

double Subdomain::measure() const {
    double m = 0;
    for (double v : cell_measure) m += v;
    return m;
}

int Subdomain::facet_index(std::vector<int> verts) const {
    std::sort(verts.begin(), verts.end());
    auto it = std::lower_bound(facets.begin(), facets.end(), verts);
    if (it == facets.end() || *it != verts) return -1;
    return int(it - facets.begin());
}

int MixedDimMesh::subdomain_index(int dim, int id) const {
    for (int i = 0; i < int(subdomains.size()); ++i)
        if (subdomains[i].dim == dim && subdomains[i].id == id) return i;
    fail("unknown subdomain (" + std::to_string(dim) + ", " + std::to_string(id) + ")");
}

const Subdomain& MixedDimMesh::subdomain(int dim, int id) const {
    return subdomains[subdomain_index(dim, id)];
}
Subdomain& MixedDimMesh::subdomain(int dim, int id) {
    return subdomains[subdomain_index(dim, id)];
}

int MixedDimMesh::n_subdomains(int dim) const {
    int n = 0;
    for (const auto& s : subdomains)
        if (s.dim == dim) ++n;
    return n;
}

// -- finalize ----------------------------------------------------------------

namespace {

void build_facets(Subdomain& s) {
    s.cell_measure.clear();
    s.cell_centroid_local.clear();
    for (const auto& cell : s.cells) {
        auto verts = gather_local(s, cell);
        if (s.dim == 0) {
            s.cell_measure.push_back(1.0);
            s.cell_centroid_local.push_back(VecX::Zero(0));
            continue;
        }
        s.cell_measure.push_back(simplex_measure(verts));
        s.cell_centroid_local.push_back(centroid(verts));
    }
    s.facets.clear();
    s.facet_cell.clear();
    s.facet_measure.clear();
    s.facet_normal.clear();
    s.facet_centroid_local.clear();
    if (s.dim == 0) {
        s.facet_tags.clear();
        return;
    }

    std::vector<std::vector<int>> tuples;
    for (const auto& cell : s.cells) {
        for (size_t drop = 0; drop < cell.size(); ++drop) {
            std::vector<int> f;
            for (size_t k = 0; k < cell.size(); ++k)
                if (k != drop) f.push_back(cell[k]);
            std::sort(f.begin(), f.end());
            tuples.push_back(std::move(f));
        }
    }
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    s.facets = std::move(tuples);

    s.facet_cell.assign(s.facets.size(), {-1, -1});
    for (int c = 0; c < s.n_cells(); ++c) {
        const auto& cell = s.cells[c];
        for (size_t drop = 0; drop < cell.size(); ++drop) {
            std::vector<int> f;
            for (size_t k = 0; k < cell.size(); ++k)
                if (k != drop) f.push_back(cell[k]);
            int idx = s.facet_index(f);
            auto& fc = s.facet_cell[idx];
            if (fc[0] < 0) fc[0] = c;
            else if (fc[1] < 0) fc[1] = c;
            else fail("facet shared by more than two cells");
        }
    }

    for (int f = 0; f < s.n_facets(); ++f) {
        auto verts = gather_local(s, s.facets[f]);
        s.facet_measure.push_back(simplex_measure(verts));
        s.facet_centroid_local.push_back(centroid(verts));
        // outward from the owner cell
        int owner = s.facet_cell[f][0];
        const auto& cell = s.cells[owner];
        int opposite = -1;
        for (size_t k = 0; k < cell.size(); ++k)
            if (std::find(s.facets[f].begin(), s.facets[f].end(), cell[k]) == s.facets[f].end())
                opposite = int(k);
        require(opposite >= 0, "facet not contained in its owner cell");
        s.facet_normal.push_back(facet_outward_normal(gather_local(s, cell), opposite));
    }

    if (s.facet_tags.empty()) s.facet_tags.assign(s.facets.size(), FacetTag::Interior);
    require(int(s.facet_tags.size()) == s.n_facets(), "facet tag array size mismatch");
}

// Convex polygon clipping (Sutherland-Hodgman) in 2D plane coordinates.
// Returns the area of the intersection of two triangles.
double clip_area(const std::array<Vec2, 3>& a, const std::array<Vec2, 3>& b) {
    std::vector<Vec2> poly(a.begin(), a.end());
    auto cross = [](const Vec2& o, const Vec2& p, const Vec2& q) {
        return (p.x() - o.x()) * (q.y() - o.y()) - (p.y() - o.y()) * (q.x() - o.x());
    };
    double orient = cross(b[0], b[1], b[2]);
    std::array<Vec2, 3> clip = b;
    if (orient < 0) std::swap(clip[1], clip[2]);
    for (int e = 0; e < 3 && !poly.empty(); ++e) {
        Vec2 p0 = clip[e], p1 = clip[(e + 1) % 3];
        std::vector<Vec2> out;
        for (size_t i = 0; i < poly.size(); ++i) {
            Vec2 cur = poly[i], nxt = poly[(i + 1) % poly.size()];
            double dc = cross(p0, p1, cur), dn = cross(p0, p1, nxt);
            if (dc >= 0) out.push_back(cur);
            if ((dc > 0 && dn < 0) || (dc < 0 && dn > 0)) {
                double t = dc / (dc - dn);
                out.push_back(cur + t * (nxt - cur));
            }
        }
        poly = std::move(out);
    }
    double area2 = 0;
    for (size_t i = 1; i + 1 < poly.size(); ++i)
        area2 += cross(poly[0], poly[i], poly[i + 1]);
    return std::abs(area2) / 2;
}

} // namespace

void MixedDimMesh::finalize() {
    for (auto& s : subdomains) build_facets(s);

    std::sort(interfaces.begin(), interfaces.end(), [](const Interface& a, const Interface& b) {
        return std::tie(a.dim, a.lower_id, a.side) < std::tie(b.dim, b.lower_id, b.side);
    });

    for (auto& itf : interfaces) {
        const Subdomain& lo = subdomain(itf.dim, itf.lower_id);
        const Subdomain& up = subdomain(itf.dim + 1, itf.upper_id);
        itf.normal_sign.clear();
        itf.overlaps.clear();
        itf.normal_sign.reserve(itf.upper_facets.size());
        itf.overlaps.reserve(itf.upper_facets.size());

        for (int f : itf.upper_facets) {
            VecX n = up.facet_normal_ambient(f);
            double d = n.dot(itf.nu);
            require(std::abs(std::abs(d) - 1.0) < 1e-9, "interface facet normal not parallel to nu");
            itf.normal_sign.push_back(d > 0 ? 1 : -1);

            std::vector<std::pair<int, double>> ov;
            if (itf.dim == 0) {
                ov.push_back({0, 1.0});
            } else if (itf.dim == 1) {
                // interval overlap in the lower subdomain's arclength coordinate
                double s0 = 1e300, s1 = -1e300;
                for (int v : up.facets[f]) {
                    VecX amb = up.vertices_ambient.col(v);
                    double s = lo.frame_tangents.col(0).dot(amb - lo.frame_origin);
                    s0 = std::min(s0, s);
                    s1 = std::max(s1, s);
                }
                for (int c = 0; c < lo.n_cells(); ++c) {
                    double a = lo.vertices_local(0, lo.cells[c][0]);
                    double b = lo.vertices_local(0, lo.cells[c][1]);
                    if (a > b) std::swap(a, b);
                    double w = std::min(b, s1) - std::max(a, s0);
                    if (w > 1e-13) ov.push_back({c, w});
                }
            } else {
                // project the upper facet into the lower plane's coordinates
                std::array<Vec2, 3> tri;
                for (int k = 0; k < 3; ++k) {
                    VecX amb = up.vertices_ambient.col(up.facets[f][k]);
                    VecX loc = lo.frame_tangents.transpose() * (amb - lo.frame_origin);
                    tri[k] = Vec2(loc(0), loc(1));
                }
                // matching grids: find the coincident mortar cell
                VecX fc = (tri[0] + tri[1] + tri[2]) / 3.0;
                int match = -1;
                for (int c = 0; c < lo.n_cells(); ++c) {
                    if ((lo.cell_centroid_local[c] - fc).norm() < 1e-10) {
                        match = c;
                        break;
                    }
                }
                if (match >= 0) {
                    ov.push_back({match, up.facet_measure[f]});
                } else if (clip_3d_mortars) {
                    for (int c = 0; c < lo.n_cells(); ++c) {
                        std::array<Vec2, 3> mc;
                        for (int k = 0; k < 3; ++k) {
                            VecX loc = lo.vertices_local.col(lo.cells[c][k]);
                            mc[k] = Vec2(loc(0), loc(1));
                        }
                        double a = clip_area(tri, mc);
                        if (a > 1e-14) ov.push_back({c, a});
                    }
                } else {
                    fail("non-matching 3D mortar interface requires clip_3d_mortars");
                }
            }
            itf.overlaps.push_back(std::move(ov));
        }
    }
}

// -- validate ----------------------------------------------------------------

void MixedDimMesh::validate() const {
    for (const auto& s : subdomains) {
        // every boundary facet carries exactly one non-interior tag
        for (int f = 0; f < s.n_facets(); ++f) {
            bool boundary = s.facet_cell[f][1] < 0;
            bool tagged = s.facet_tags[f] != FacetTag::Interior;
            if (boundary && !tagged)
                fail("untagged boundary facet in subdomain (" + std::to_string(s.dim) + "," +
                     std::to_string(s.id) + ")");
            if (!boundary && tagged) fail("interior facet carries a boundary tag");
        }
        for (double m : s.cell_measure)
            require(m > 0, "nonpositive cell measure");
    }

    // top-dimensional subdomains need a Dirichlet boundary
    for (const auto& s : subdomains) {
        if (s.dim != ambient_dim) continue;
        bool has = false;
        for (auto t : s.facet_tags)
            if (t == FacetTag::Dirichlet) has = true;
        require(has, "top-dimensional subdomain without Dirichlet boundary");
    }

    // lower-dimensional subdomains must have at least one side
    for (const auto& s : subdomains) {
        if (s.dim >= ambient_dim) continue;
        int sides = 0;
        for (const auto& itf : interfaces)
            if (itf.dim == s.dim && itf.lower_id == s.id) ++sides;
        require(sides > 0, "lower-dimensional subdomain with empty side set");
    }

    for (const auto& itf : interfaces) {
        const Subdomain& lo = subdomains[subdomain_index(itf.dim, itf.lower_id)];
        const Subdomain& up = subdomains[subdomain_index(itf.dim + 1, itf.upper_id)];

        // interface coverage: summed mortar-cell measure equals |Omega_i^d|;
        // the mortar grid is the lower mesh, so check the trace decomposition
        double lower_measure = lo.measure();
        double side_measure = 0;
        std::vector<double> per_cell(lo.n_cells(), 0.0);
        for (size_t k = 0; k < itf.upper_facets.size(); ++k) {
            int f = itf.upper_facets[k];
            side_measure += up.facet_measure[f];
            double covered = 0;
            for (auto [c, w] : itf.overlaps[k]) {
                covered += w;
                per_cell[c] += w;
            }
            require(std::abs(covered - up.facet_measure[f]) < 1e-10 * std::max(1.0, up.facet_measure[f]),
                    "interface facet not covered by mortar cells");
        }
        require(std::abs(side_measure - lower_measure) < 1e-10 * std::max(1.0, lower_measure),
                "interface side does not cover the lower subdomain");
        for (int c = 0; c < lo.n_cells(); ++c)
            require(std::abs(per_cell[c] - lo.cell_measure[c]) < 1e-10,
                    "mortar cell not covered by interface facets");

        // geometric coincidence of facet centroids with the lower plane
        for (size_t k = 0; k < itf.upper_facets.size(); ++k) {
            VecX amb = up.facet_centroid_ambient(itf.upper_facets[k]);
            VecX rel = amb - lo.frame_origin;
            VecX in_plane = lo.dim > 0 ? VecX(lo.frame_tangents * (lo.frame_tangents.transpose() * rel))
                                       : VecX(VecX::Zero(rel.size()));
            require((rel - in_plane).norm() < 1e-9, "interface facet off the lower subdomain plane");
        }

        // orientation: nu points from the adjacent upper cell toward the facet
        for (size_t k = 0; k < itf.upper_facets.size(); ++k) {
            int f = itf.upper_facets[k];
            int owner = up.facet_cell[f][0];
            require(up.facet_cell[f][1] < 0, "interface facet is interior to the upper subdomain");
            VecX d = up.facet_centroid_ambient(f) - up.cell_centroid_ambient(owner);
            require(d.dot(itf.nu) > 0, "interface normal does not point toward the lower subdomain");
        }
    }
}

// -- refinement ---------------------------------------------------------------

namespace detail {

std::vector<std::vector<int>> red_children(const std::vector<int>& cell,
                                           const std::map<std::pair<int, int>, int>& midpoint) {
    auto mid = [&](int a, int b) {
        auto it = midpoint.find({std::min(a, b), std::max(a, b)});
        if (it == midpoint.end()) throw std::runtime_error("missing midpoint");
        return it->second;
    };
    const int nv = int(cell.size());
    if (nv == 1) return {cell};
    if (nv == 2) {
        int m = mid(cell[0], cell[1]);
        return {{cell[0], m}, {m, cell[1]}};
    }
    if (nv == 3) {
        int m01 = mid(cell[0], cell[1]), m12 = mid(cell[1], cell[2]), m02 = mid(cell[0], cell[2]);
        return {{cell[0], m01, m02}, {m01, cell[1], m12}, {m02, m12, cell[2]}, {m01, m12, m02}};
    }
    if (nv == 4) {
        int m01 = mid(cell[0], cell[1]), m02 = mid(cell[0], cell[2]), m03 = mid(cell[0], cell[3]);
        int m12 = mid(cell[1], cell[2]), m13 = mid(cell[1], cell[3]), m23 = mid(cell[2], cell[3]);
        // Bey's red refinement, interior octahedron split along (m02, m13)
        return {{cell[0], m01, m02, m03}, {m01, cell[1], m12, m13},
                {m02, m12, cell[2], m23}, {m03, m13, m23, cell[3]},
                {m01, m02, m03, m13},     {m01, m02, m12, m13},
                {m02, m03, m13, m23},     {m02, m12, m13, m23}};
    }
    throw std::runtime_error("red_children: unsupported cell");
}

} // namespace detail

MixedDimMesh refine(const MixedDimMesh& mesh, RefinementMap* map) {
    MixedDimMesh out;
    out.ambient_dim = mesh.ambient_dim;
    out.refinement_level = mesh.refinement_level + 1;
    out.preset = mesh.preset;
    out.tip_points = mesh.tip_points;
    out.clip_3d_mortars = mesh.clip_3d_mortars;
    out.subdomains.reserve(mesh.subdomains.size());

    if (map) {
        map->cell_parent.assign(mesh.subdomains.size(), {});
        map->facet_parent.assign(mesh.subdomains.size(), {});
        map->facet_sign.assign(mesh.subdomains.size(), {});
    }

    // vertex provenance per subdomain: original index or parent pair
    std::vector<std::vector<std::pair<int, int>>> provenance(mesh.subdomains.size());

    for (size_t si = 0; si < mesh.subdomains.size(); ++si) {
        const Subdomain& s = mesh.subdomains[si];
        Subdomain r;
        r.dim = s.dim;
        r.id = s.id;
        r.frame_origin = s.frame_origin;
        r.frame_tangents = s.frame_tangents;

        if (s.dim == 0) {
            r.vertices_ambient = s.vertices_ambient;
            r.vertices_local = s.vertices_local;
            r.cells = s.cells;
            provenance[si] = {{0, -1}};
            if (map) map->cell_parent[si] = {0};
            out.subdomains.push_back(std::move(r));
            continue;
        }

        // collect midpoints of all cell edges
        std::map<std::pair<int, int>, int> midpoint;
        int nv = int(s.vertices_ambient.cols());
        std::vector<VecX> amb, loc;
        for (int v = 0; v < nv; ++v) {
            amb.push_back(s.vertices_ambient.col(v));
            loc.push_back(s.vertices_local.col(v));
            provenance[si].push_back({v, -1});
        }
        for (const auto& cell : s.cells) {
            for (size_t i = 0; i < cell.size(); ++i)
                for (size_t j = i + 1; j < cell.size(); ++j) {
                    auto key = std::minmax(cell[i], cell[j]);
                    if (midpoint.count(key)) continue;
                    midpoint[key] = int(amb.size());
                    amb.push_back(0.5 * (s.vertices_ambient.col(key.first) +
                                         s.vertices_ambient.col(key.second)));
                    loc.push_back(0.5 * (s.vertices_local.col(key.first) +
                                         s.vertices_local.col(key.second)));
                    provenance[si].push_back({key.first, key.second});
                }
        }
        r.vertices_ambient.resize(s.vertices_ambient.rows(), amb.size());
        r.vertices_local.resize(s.vertices_local.rows(), loc.size());
        for (size_t v = 0; v < amb.size(); ++v) {
            r.vertices_ambient.col(v) = amb[v];
            r.vertices_local.col(v) = loc[v];
        }
        for (int c = 0; c < s.n_cells(); ++c) {
            for (auto& child : detail::red_children(s.cells[c], midpoint)) {
                r.cells.push_back(child);
                if (map) map->cell_parent[si].push_back(c);
            }
        }
        out.subdomains.push_back(std::move(r));
    }

    // interfaces: children of side facets stay on the side
    for (const auto& itf : mesh.interfaces) {
        Interface nitf;
        nitf.dim = itf.dim;
        nitf.lower_id = itf.lower_id;
        nitf.side = itf.side;
        nitf.upper_id = itf.upper_id;
        nitf.nu = itf.nu;
        out.interfaces.push_back(std::move(nitf));
    }

    // build facets now so facet indices exist
    for (auto& s : out.subdomains) s.facet_tags.clear();
    // tags are assigned from parents below, then finalize() checks them
    for (size_t si = 0; si < out.subdomains.size(); ++si) {
        Subdomain& r = out.subdomains[si];
        build_facets(r); // with empty tags -> all Interior, fixed next
    }

    // carry facet tags and record parent facets; for each fine facet the
    // candidate parents are just the facets of the owner's parent cell
    std::vector<std::vector<int>> fine_facet_parent(mesh.subdomains.size());
    for (size_t si = 0; si < mesh.subdomains.size(); ++si) {
        const Subdomain& s = mesh.subdomains[si];
        Subdomain& r = out.subdomains[si];
        if (s.dim == 0) continue;

        std::vector<int> child_parent;
        child_parent.reserve(r.n_cells());
        {
            std::map<std::pair<int, int>, int> dummy; // children counted in creation order
            int per = 1 << s.dim;
            for (int c = 0; c < s.n_cells(); ++c)
                for (int k = 0; k < per; ++k) child_parent.push_back(c);
        }

        auto on_parent_facet = [&](int fine_v, const std::vector<int>& pf) {
            auto [a, b] = provenance[si][fine_v];
            auto in = [&](int v) { return std::find(pf.begin(), pf.end(), v) != pf.end(); };
            return b < 0 ? in(a) : (in(a) && in(b));
        };

        std::vector<int> fparent(r.n_facets(), -1);
        std::vector<int8_t> fsign(r.n_facets(), 1);
        for (int fc = 0; fc < r.n_facets(); ++fc) {
            int pc = child_parent[r.facet_cell[fc][0]];
            const auto& pcell = s.cells[pc];
            for (size_t drop = 0; drop < pcell.size(); ++drop) {
                std::vector<int> pf;
                for (size_t k = 0; k < pcell.size(); ++k)
                    if (k != drop) pf.push_back(pcell[k]);
                bool on = true;
                for (int v : r.facets[fc])
                    if (!on_parent_facet(v, pf)) {
                        on = false;
                        break;
                    }
                if (!on) continue;
                int pidx = s.facet_index(pf);
                fparent[fc] = pidx;
                double d = r.facet_normal_ambient(fc).dot(s.facet_normal_ambient(pidx));
                fsign[fc] = d > 0 ? 1 : -1;
                r.facet_tags[fc] = s.facet_tags[pidx];
                break;
            }
        }
        fine_facet_parent[si] = fparent;
        if (map) {
            map->facet_parent[si] = fparent;
            map->facet_sign[si] = std::move(fsign);
        }
    }

    // interface facet lists: fine facets whose parent is in the parent side set
    for (size_t ii = 0; ii < mesh.interfaces.size(); ++ii) {
        const Interface& pitf = mesh.interfaces[ii];
        Interface& nitf = out.interfaces[ii];
        int usi = mesh.subdomain_index(pitf.dim + 1, pitf.upper_id);
        const Subdomain& ru = out.subdomains[usi];
        std::set<int> parent_set(pitf.upper_facets.begin(), pitf.upper_facets.end());
        for (int fc = 0; fc < ru.n_facets(); ++fc) {
            int pf = fine_facet_parent[usi].empty() ? -1 : fine_facet_parent[usi][fc];
            if (pf >= 0 && parent_set.count(pf)) nitf.upper_facets.push_back(fc);
        }
        std::sort(nitf.upper_facets.begin(), nitf.upper_facets.end());
    }

    out.finalize();
    return out;
}

} // namespace mdfrac
