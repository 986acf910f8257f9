#include "mdfrac/presets.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <stdexcept>

// Analytic construction of the 2D benchmark hierarchies. Each matrix
// component is decomposed into simple polygons whose internal seams carry
// identical boundary partitions (so they merge conformally), while fracture
// sides carry independently jittered partitions and therefore stay
// non-matching at every refinement level.

namespace mdfrac {
namespace {

struct PieceNode {
    double s;
    Vec2 pt;
};

/// A fracture segment with exact breakpoint coordinates. Side partitions
/// are generated per piece so that polygon corners reuse the same bits.
struct FractureSpec {
    int id = 0;
    Vec2 a, b;
    std::vector<PieceNode> breaks; // interior breakpoints, ascending s
    std::vector<int> mortar_cells; // per piece, level-0 cell counts
    FacetTag end_a = FacetTag::Tip, end_b = FacetTag::Tip;
    double length() const { return (b - a).norm(); }
    std::vector<PieceNode> bounds() const {
        std::vector<PieceNode> r;
        r.push_back({0.0, a});
        for (auto& n : breaks) r.push_back(n);
        r.push_back({length(), b});
        return r;
    }
};

std::vector<PieceNode> make_partition(const std::vector<PieceNode>& bounds,
                                      const std::vector<int>& counts, double jitter,
                                      const std::string& seed_key) {
    SplitMix64 rng(seed_from_key(seed_key));
    std::vector<PieceNode> nodes;
    nodes.push_back(bounds.front());
    for (size_t p = 0; p + 1 < bounds.size(); ++p) {
        const auto& lo = bounds[p];
        const auto& hi = bounds[p + 1];
        int m = counts[p];
        for (int k = 1; k < m; ++k) {
            double t = (k + jitter * rng.sym()) / m;
            nodes.push_back({lo.s + t * (hi.s - lo.s), (1 - t) * lo.pt + t * hi.pt});
        }
        nodes.push_back(hi);
    }
    return nodes;
}

struct EdgeRef {
    enum Kind { Fracture, Cut, Boundary } kind = Boundary;
    int frac_id = -1, side = -1;
    int piece_begin = 0, piece_end = 0; // [begin, end)
    bool reversed = false;
    int cut_id = -1;
    FacetTag btag = FacetTag::Neumann;
    Vec2 from, to; // used for Boundary edges
};

struct CutSpec {
    int id;
    Vec2 inner, outer;
    int cells;
};

struct BuilderConfig {
    std::string name;
    std::vector<FractureSpec> fractures;
    std::vector<CutSpec> cuts;
    std::vector<std::vector<EdgeRef>> polygons;
    // 0-d subdomains: position plus (frac id, at_end_b) branches, sorted by frac id
    struct PointSpec {
        Vec2 pos;
        std::vector<std::pair<int, bool>> branches;
    };
    std::vector<PointSpec> points;
    std::vector<Vec2> tips;
    FacetTag left = FacetTag::Neumann, right = FacetTag::Neumann;
    FacetTag bottom = FacetTag::Dirichlet, top = FacetTag::Dirichlet;
    double h_side = 0.1;
    double jitter = 0.3;
    bool matching = false;
};

struct EdgeLabel {
    FacetTag tag;
    int frac_id = -1, side = -1;
    double s0 = 0, s1 = 0;
};

MixedDimMesh build_from_config(const BuilderConfig& cfg) {
    MixedDimMesh mesh;
    mesh.ambient_dim = 2;
    mesh.preset = cfg.name;
    for (const Vec2& t : cfg.tips) mesh.tip_points.push_back(Vec3(t.x(), t.y(), 0).head(2));

    // side partitions: per fracture, per side, per piece node lists
    std::map<std::pair<int, int>, std::vector<std::vector<PieceNode>>> side_parts;
    for (const auto& fr : cfg.fractures) {
        auto bounds = fr.bounds();
        for (int side = 0; side < 2; ++side) {
            std::vector<int> counts;
            for (int c : fr.mortar_cells) counts.push_back(cfg.matching ? c : 2 * c);
            double jit = cfg.matching ? 0.0 : cfg.jitter;
            auto nodes = make_partition(bounds, counts, jit,
                                        cfg.name + "/f" + std::to_string(fr.id) + "/s" +
                                            std::to_string(side));
            // split back into pieces
            std::vector<std::vector<PieceNode>> pieces;
            size_t at = 0;
            for (size_t p = 0; p + 1 < bounds.size(); ++p) {
                std::vector<PieceNode> piece;
                piece.push_back(nodes[at]);
                while (nodes[at].s != bounds[p + 1].s) {
                    ++at;
                    piece.push_back(nodes[at]);
                }
                pieces.push_back(std::move(piece));
            }
            side_parts[{fr.id, side}] = std::move(pieces);
        }
    }

    std::map<int, std::vector<PieceNode>> cut_parts;
    for (const auto& cut : cfg.cuts) {
        std::vector<PieceNode> bounds{{0.0, cut.inner}, {(cut.outer - cut.inner).norm(), cut.outer}};
        cut_parts[cut.id] =
            make_partition(bounds, {cut.cells}, 0.2, cfg.name + "/cut" + std::to_string(cut.id));
    }

    // The matrix subdomain is assembled from the triangulated polygons.
    // Vertices are deliberately NOT merged by coordinate: fracture sides must
    // stay topologically separate even when their traces coincide. The only
    // shared seams are the artificial cuts, unified through union-find below.
    std::vector<Vec2> verts;
    std::vector<std::vector<int>> cells;
    std::vector<int> remap;
    auto find_root = [&](int v) {
        while (remap[v] != v) v = remap[v] = remap[remap[v]];
        return v;
    };
    std::map<int, std::vector<int>> cut_vertex_ids; // in the cut's own order
    struct RawLabel {
        int va, vb;
        EdgeLabel lab;
    };
    std::vector<RawLabel> raw_labels;

    auto boundary_tag = [&](const Vec2& p, const Vec2& q) {
        auto near = [](double a, double b) { return std::abs(a - b) < 1e-12; };
        if (near(p.y(), 0) && near(q.y(), 0)) return cfg.bottom;
        if (near(p.y(), 1) && near(q.y(), 1)) return cfg.top;
        if (near(p.x(), 0) && near(q.x(), 0)) return cfg.left;
        if (near(p.x(), 1) && near(q.x(), 1)) return cfg.right;
        throw std::runtime_error("boundary edge not on the unit square");
    };

    for (const auto& poly : cfg.polygons) {
        std::vector<Vec2> chain;
        std::vector<EdgeLabel> chain_labels; // label of edge chain[i] -> chain[i+1]
        struct PendingCut {
            int cut_id, start, count;
            bool reversed;
        };
        std::vector<PendingCut> pending_cuts;
        for (const auto& e : poly) {
            std::vector<PieceNode> nodes;
            if (e.kind == EdgeRef::Fracture) {
                for (int p = e.piece_begin; p < e.piece_end; ++p) {
                    const auto& piece = side_parts.at({e.frac_id, e.side})[p];
                    for (size_t k = nodes.empty() ? 0 : 1; k < piece.size(); ++k)
                        nodes.push_back(piece[k]);
                }
            } else if (e.kind == EdgeRef::Cut) {
                nodes = cut_parts.at(e.cut_id);
            } else {
                double len = (e.to - e.from).norm();
                int m = std::max<int>(1, llround(len / cfg.h_side));
                nodes = make_partition({{0.0, e.from}, {len, e.to}}, {m}, 0.0, "bnd");
            }
            if (e.reversed) std::reverse(nodes.begin(), nodes.end());
            if (e.kind == EdgeRef::Cut)
                pending_cuts.push_back({e.cut_id, int(chain.size()), int(nodes.size()), e.reversed});
            for (size_t k = 0; k + 1 < nodes.size(); ++k) {
                chain.push_back(nodes[k].pt);
                EdgeLabel lab;
                if (e.kind == EdgeRef::Fracture) {
                    lab.tag = FacetTag::Interface;
                    lab.frac_id = e.frac_id;
                    lab.side = e.side;
                    lab.s0 = std::min(nodes[k].s, nodes[k + 1].s);
                    lab.s1 = std::max(nodes[k].s, nodes[k + 1].s);
                } else if (e.kind == EdgeRef::Cut) {
                    lab.tag = FacetTag::Interior;
                } else {
                    lab.tag = boundary_tag(nodes[k].pt, nodes[k + 1].pt);
                }
                chain_labels.push_back(lab);
            }
        }
        auto tris = triangulate_polygon(chain);
        const int base = int(verts.size());
        for (const Vec2& p : chain) {
            verts.push_back(p);
            remap.push_back(int(remap.size()));
        }
        auto gid = [&](int pos) { return base + (pos % int(chain.size())); };
        for (auto& t : tris) cells.push_back({base + t[0], base + t[1], base + t[2]});
        for (size_t i = 0; i < chain.size(); ++i) {
            const EdgeLabel& lab = chain_labels[i];
            if (lab.tag == FacetTag::Interior) continue;
            raw_labels.push_back({gid(int(i)), gid(int(i) + 1), lab});
        }
        for (const auto& pc : pending_cuts) {
            std::vector<int> ids;
            for (int k = 0; k < pc.count; ++k) ids.push_back(gid(pc.start + k));
            if (pc.reversed) std::reverse(ids.begin(), ids.end());
            auto it = cut_vertex_ids.find(pc.cut_id);
            if (it == cut_vertex_ids.end()) {
                cut_vertex_ids[pc.cut_id] = ids;
            } else {
                for (size_t k = 0; k < ids.size(); ++k) {
                    int a = find_root(it->second[k]), b = find_root(ids[k]);
                    if (a != b) remap[b] = a;
                }
            }
        }
    }

    // compact the vertex array after seam unification
    {
        std::vector<int> compact(verts.size(), -1);
        std::vector<Vec2> final_verts;
        for (size_t v = 0; v < verts.size(); ++v) {
            int r = find_root(int(v));
            if (compact[r] < 0) {
                compact[r] = int(final_verts.size());
                final_verts.push_back(verts[r]);
            }
            compact[v] = compact[r];
        }
        for (auto& cell : cells)
            for (int& v : cell) v = compact[v];
        for (auto& rl : raw_labels) {
            rl.va = compact[rl.va];
            rl.vb = compact[rl.vb];
        }
        verts = std::move(final_verts);
    }
    std::map<std::pair<int, int>, EdgeLabel> labels;
    for (const auto& rl : raw_labels) labels[std::minmax(rl.va, rl.vb)] = rl.lab;

    Subdomain matrix;
    matrix.dim = 2;
    matrix.id = 1;
    matrix.vertices_ambient.resize(2, verts.size());
    for (size_t i = 0; i < verts.size(); ++i) matrix.vertices_ambient.col(i) = verts[i];
    matrix.vertices_local = matrix.vertices_ambient;
    matrix.frame_origin = Vec2(0, 0);
    matrix.frame_tangents = Eigen::Matrix2d::Identity();
    matrix.cells = cells;
    mesh.subdomains.push_back(std::move(matrix));

    // fracture subdomains from their (uniform per piece) mortar partitions
    std::map<int, int> frac_sub_index;
    for (const auto& fr : cfg.fractures) {
        auto nodes = make_partition(fr.bounds(), fr.mortar_cells, 0.0, "mortar");
        Subdomain s;
        s.dim = 1;
        s.id = fr.id;
        s.vertices_ambient.resize(2, nodes.size());
        s.vertices_local.resize(1, nodes.size());
        for (size_t i = 0; i < nodes.size(); ++i) {
            s.vertices_ambient.col(i) = nodes[i].pt;
            s.vertices_local(0, i) = nodes[i].s;
        }
        s.frame_origin = fr.a;
        Vec2 t = (fr.b - fr.a) / fr.length();
        s.frame_tangents = t;
        for (size_t c = 0; c + 1 < nodes.size(); ++c)
            s.cells.push_back({int(c), int(c + 1)});
        frac_sub_index[fr.id] = int(mesh.subdomains.size());
        mesh.subdomains.push_back(std::move(s));
    }

    // 0-d subdomains
    for (size_t pi = 0; pi < cfg.points.size(); ++pi) {
        Subdomain s;
        s.dim = 0;
        s.id = int(pi) + 1;
        s.vertices_ambient.resize(2, 1);
        s.vertices_ambient.col(0) = cfg.points[pi].pos;
        s.vertices_local.resize(0, 1);
        s.frame_origin = cfg.points[pi].pos;
        s.frame_tangents.resize(2, 0);
        s.cells = {{0}};
        mesh.subdomains.push_back(std::move(s));
    }

    // facet tags for fracture meshes (endpoints) and interface bookkeeping
    mesh.finalize(); // builds facet lists; tags fixed below, then re-finalized

    Subdomain& mat = mesh.subdomains[0];
    mat.facet_tags.assign(mat.n_facets(), FacetTag::Interior);
    std::map<std::pair<int, int>, std::vector<std::pair<int, std::pair<double, double>>>>
        side_facets; // (frac, side) -> [(facet, srange)]
    for (const auto& [key, lab] : labels) {
        int fidx = mat.facet_index({key.first, key.second});
        if (fidx < 0) throw std::runtime_error("labeled edge is not a mesh facet");
        mat.facet_tags[fidx] = lab.tag;
        if (lab.tag == FacetTag::Interface)
            side_facets[{lab.frac_id, lab.side}].push_back({fidx, {lab.s0, lab.s1}});
    }

    for (const auto& fr : cfg.fractures) {
        Subdomain& s = mesh.subdomains[frac_sub_index[fr.id]];
        s.facet_tags.assign(s.n_facets(), FacetTag::Interior);
        int f_a = s.facet_index({0});
        int f_b = s.facet_index({int(s.vertices_ambient.cols()) - 1});
        s.facet_tags[f_a] = fr.end_a;
        s.facet_tags[f_b] = fr.end_b;
    }

    // fracture-matrix interfaces
    for (const auto& fr : cfg.fractures) {
        Vec2 t = (fr.b - fr.a) / fr.length();
        Vec2 N(-t.y(), t.x());
        for (int side = 0; side < 2; ++side) {
            Interface itf;
            itf.dim = 1;
            itf.lower_id = fr.id;
            itf.side = side;
            itf.upper_id = 1;
            itf.nu = side == 0 ? Vec2(-N) : Vec2(N);
            auto& sf = side_facets[{fr.id, side}];
            std::sort(sf.begin(), sf.end(),
                      [](const auto& a, const auto& b) { return a.second.first < b.second.first; });
            for (auto& [fidx, srange] : sf) itf.upper_facets.push_back(fidx);
            mesh.interfaces.push_back(std::move(itf));
        }
    }

    // point-fracture interfaces
    for (size_t pi = 0; pi < cfg.points.size(); ++pi) {
        int side = 0;
        for (auto [fid, at_b] : cfg.points[pi].branches) {
            const Subdomain& fs = mesh.subdomains[frac_sub_index[fid]];
            const FractureSpec* fr = nullptr;
            for (const auto& f : cfg.fractures)
                if (f.id == fid) fr = &f;
            Vec2 t = (fr->b - fr->a) / fr->length();
            Interface itf;
            itf.dim = 0;
            itf.lower_id = int(pi) + 1;
            itf.side = side++;
            itf.upper_id = fid;
            itf.nu = at_b ? Vec2(t) : Vec2(-t);
            int vcount = int(fs.vertices_ambient.cols());
            itf.upper_facets.push_back(fs.facet_index({at_b ? vcount - 1 : 0}));
            mesh.interfaces.push_back(std::move(itf));
        }
    }

    mesh.finalize();
    return mesh;
}

// exact breakpoint coordinates of the square2d configuration
const Vec2 kP{0.5, 0.75};
const Vec2 kT1{0.7, 0.8}, kT2{0.3, 0.9}, kT3{0.3, 0.7}, kT4{0.7, 0.6};
const Vec2 kA5{0.75, 0.0}, kB6{0.0, 0.3}, kT6{0.5, 0.3};
const Vec2 kB7L{0.0, 0.5}, kB7R{1.0, 0.5};
const Vec2 kX57{7.0 / 12.0, 0.5};
const Vec2 kC6F{0.65, 0.3};
const Vec2 kC1E{1.0, 0.875}, kC2E{1.0 / 6.0, 1.0}, kC3E{0.0, 0.625}, kC4F{5.0 / 6.0, 0.5};
const Vec2 kV7{0.5, 0.5}; // aperture closure point of the pinch-out

EdgeRef frac_edge(int id, int side, int p0, int p1, bool rev) {
    EdgeRef e;
    e.kind = EdgeRef::Fracture;
    e.frac_id = id;
    e.side = side;
    e.piece_begin = p0;
    e.piece_end = p1;
    e.reversed = rev;
    return e;
}
EdgeRef cut_edge(int id, bool rev) {
    EdgeRef e;
    e.kind = EdgeRef::Cut;
    e.cut_id = id;
    e.reversed = rev;
    return e;
}
EdgeRef bnd_edge(const Vec2& from, const Vec2& to) {
    EdgeRef e;
    e.kind = EdgeRef::Boundary;
    e.from = from;
    e.to = to;
    return e;
}

int cells_for(double len, double h) { return std::max<int>(1, llround(len / h)); }

} // namespace

namespace detail {

MixedDimMesh build_square2d_level0(const MeshOptions& opt) {
    BuilderConfig cfg;
    cfg.name = "square2d";
    cfg.matching = opt.matching_sides;
    const double h0 = 0.2;

    auto spoke = [&](int id, const Vec2& b) {
        FractureSpec fr;
        fr.id = id;
        fr.a = kP;
        fr.b = b;
        fr.mortar_cells = {cells_for(fr.length(), h0)};
        fr.end_a = FacetTag::Interface;
        fr.end_b = FacetTag::Tip;
        return fr;
    };
    cfg.fractures.push_back(spoke(1, kT1));
    cfg.fractures.push_back(spoke(2, kT2));
    cfg.fractures.push_back(spoke(3, kT3));
    cfg.fractures.push_back(spoke(4, kT4));

    FractureSpec f5;
    f5.id = 5;
    f5.a = kA5;
    f5.b = kP;
    f5.breaks = {{(kC6F - kA5).norm(), kC6F}, {(kX57 - kA5).norm(), kX57}};
    {
        auto b = f5.bounds();
        for (size_t p = 0; p + 1 < b.size(); ++p)
            f5.mortar_cells.push_back(cells_for(b[p + 1].s - b[p].s, h0));
    }
    f5.end_a = FacetTag::Dirichlet;
    f5.end_b = FacetTag::Interface;
    cfg.fractures.push_back(f5);

    FractureSpec f6;
    f6.id = 6;
    f6.a = kB6;
    f6.b = kT6;
    f6.mortar_cells = {cells_for(0.5, h0)};
    f6.end_a = FacetTag::Neumann;
    f6.end_b = FacetTag::Tip;
    cfg.fractures.push_back(f6);

    FractureSpec f7;
    f7.id = 7;
    f7.a = kB7L;
    f7.b = kB7R;
    f7.breaks = {{0.5, kV7}, {7.0 / 12.0, kX57}, {5.0 / 6.0, kC4F}};
    {
        auto b = f7.bounds();
        for (size_t p = 0; p + 1 < b.size(); ++p)
            f7.mortar_cells.push_back(cells_for(b[p + 1].s - b[p].s, h0));
    }
    f7.end_a = FacetTag::Neumann;
    f7.end_b = FacetTag::Neumann;
    cfg.fractures.push_back(f7);

    cfg.cuts = {
        {1, kT1, kC1E, cells_for((kC1E - kT1).norm(), 0.1)},
        {2, kT2, kC2E, cells_for((kC2E - kT2).norm(), 0.1)},
        {3, kT3, kC3E, cells_for((kC3E - kT3).norm(), 0.1)},
        {4, kT4, kC4F, cells_for((kC4F - kT4).norm(), 0.1)},
        {6, kT6, kC6F, cells_for((kC6F - kT6).norm(), 0.1)},
    };

    // the five sectors around the intersection, then the lower components
    cfg.polygons.push_back({frac_edge(1, 0, 0, 1, false), cut_edge(1, false),
                            bnd_edge(kC1E, Vec2(1, 1)), bnd_edge(Vec2(1, 1), kC2E),
                            cut_edge(2, true), frac_edge(2, 1, 0, 1, true)});
    cfg.polygons.push_back({frac_edge(2, 0, 0, 1, false), cut_edge(2, false),
                            bnd_edge(kC2E, Vec2(0, 1)), bnd_edge(Vec2(0, 1), kC3E),
                            cut_edge(3, true), frac_edge(3, 1, 0, 1, true)});
    cfg.polygons.push_back({frac_edge(3, 0, 0, 1, false), cut_edge(3, false),
                            bnd_edge(kC3E, kB7L), frac_edge(7, 0, 0, 2, false),
                            frac_edge(5, 0, 2, 3, false)});
    cfg.polygons.push_back({frac_edge(5, 1, 2, 3, true), frac_edge(7, 0, 2, 3, false),
                            cut_edge(4, true), frac_edge(4, 1, 0, 1, true)});
    cfg.polygons.push_back({frac_edge(4, 0, 0, 1, false), cut_edge(4, false),
                            frac_edge(7, 0, 3, 4, false), bnd_edge(kB7R, kC1E),
                            cut_edge(1, true), frac_edge(1, 1, 0, 1, true)});
    cfg.polygons.push_back({frac_edge(6, 0, 0, 1, false), cut_edge(6, false),
                            frac_edge(5, 0, 1, 2, false), frac_edge(7, 1, 0, 2, true),
                            bnd_edge(kB7L, kB6)});
    cfg.polygons.push_back({bnd_edge(Vec2(0, 0), kA5), frac_edge(5, 0, 0, 1, false),
                            cut_edge(6, true), frac_edge(6, 1, 0, 1, true),
                            bnd_edge(kB6, Vec2(0, 0))});
    cfg.polygons.push_back({bnd_edge(kA5, Vec2(1, 0)), bnd_edge(Vec2(1, 0), kB7R),
                            frac_edge(7, 1, 2, 4, true), frac_edge(5, 1, 0, 2, true)});

    cfg.points.push_back({kP, {{1, false}, {2, false}, {3, false}, {4, false}, {5, true}}});
    cfg.tips = {kT1, kT2, kT3, kT4, kT6, kV7};
    return build_from_config(cfg);
}

MixedDimMesh build_single_fracture_level0(const MeshOptions& opt) {
    BuilderConfig cfg;
    cfg.name = "single-fracture-2d";
    cfg.matching = opt.matching_sides;
    cfg.left = FacetTag::Dirichlet;
    cfg.right = FacetTag::Dirichlet;
    cfg.bottom = FacetTag::Neumann;
    cfg.top = FacetTag::Neumann;

    FractureSpec fr;
    fr.id = 1;
    fr.a = Vec2(0.5, 0.0);
    fr.b = Vec2(0.5, 1.0);
    fr.mortar_cells = {5};
    fr.end_a = FacetTag::Neumann;
    fr.end_b = FacetTag::Neumann;
    cfg.fractures.push_back(fr);

    cfg.polygons.push_back({bnd_edge(Vec2(0, 0), Vec2(0.5, 0)), frac_edge(1, 0, 0, 1, false),
                            bnd_edge(Vec2(0.5, 1), Vec2(0, 1)), bnd_edge(Vec2(0, 1), Vec2(0, 0))});
    cfg.polygons.push_back({bnd_edge(Vec2(0.5, 0), Vec2(1, 0)), bnd_edge(Vec2(1, 0), Vec2(1, 1)),
                            bnd_edge(Vec2(1, 1), Vec2(0.5, 1)), frac_edge(1, 1, 0, 1, true)});
    return build_from_config(cfg);
}

MixedDimMesh build_unfractured_level0(const MeshOptions&) {
    MixedDimMesh mesh;
    mesh.ambient_dim = 2;
    mesh.preset = "unfractured-2d";
    Subdomain s;
    s.dim = 2;
    s.id = 1;
    s.vertices_ambient.resize(2, 4);
    s.vertices_ambient << 0, 1, 1, 0, 0, 0, 1, 1;
    s.vertices_local = s.vertices_ambient;
    s.frame_origin = Vec2(0, 0);
    s.frame_tangents = Eigen::Matrix2d::Identity();
    s.cells = {{0, 1, 2}, {0, 2, 3}};
    mesh.subdomains.push_back(std::move(s));
    mesh.finalize();
    Subdomain& m = mesh.subdomains[0];
    m.facet_tags.assign(m.n_facets(), FacetTag::Interior);
    for (int f = 0; f < m.n_facets(); ++f)
        if (m.facet_cell[f][1] < 0) m.facet_tags[f] = FacetTag::Dirichlet;
    mesh.finalize();
    return mesh;
}

} // namespace detail

} // namespace mdfrac
