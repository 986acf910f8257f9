#include <doctest.h>

#include "mdfrac/mesh.hpp"
#include "mdfrac/presets.hpp"
#include "mdfrac/scaling.hpp"

#include <cmath>
#include <map>

using namespace mdfrac;

TEST_CASE("cube3d level 0 realizes the 8/12/6/1 decomposition") {
    MixedDimMesh mesh = build_benchmark_mesh("cube3d", 0);
    CHECK(mesh.n_subdomains(3) == 8);
    CHECK(mesh.n_subdomains(2) == 12);
    CHECK(mesh.n_subdomains(1) == 6);
    CHECK(mesh.n_subdomains(0) == 1);
    mesh.validate();
    // matching mortar grids on every interface
    for (const auto& itf : mesh.interfaces)
        for (const auto& ov : itf.overlaps) CHECK(ov.size() == 1);
}

TEST_CASE("unfractured-2d level 0 is a single triangle pair without interfaces") {
    MixedDimMesh mesh = build_benchmark_mesh("unfractured-2d", 0);
    CHECK(mesh.subdomains.size() == 1);
    CHECK(mesh.interfaces.empty());
    CHECK(mesh.subdomains[0].n_cells() == 2);
    CHECK(mesh.subdomains[0].n_facets() == 5);
    mesh.validate();
}

TEST_CASE("square2d realizes the Table-1 features") {
    MixedDimMesh mesh = build_benchmark_mesh("square2d", 0);
    CHECK(mesh.n_subdomains(2) == 1);
    CHECK(mesh.n_subdomains(1) == 7);
    CHECK(mesh.n_subdomains(0) == 1);
    mesh.validate();

    const Subdomain& f5 = mesh.subdomain(1, 5);
    Vec2 a = f5.vertices_ambient.col(0);
    Vec2 b = f5.vertices_ambient.col(f5.vertices_ambient.cols() - 1);
    CHECK(a.x() == doctest::Approx(0.75));
    CHECK(a.y() == doctest::Approx(0.0));
    CHECK(b.x() == doctest::Approx(0.5));
    CHECK(b.y() == doctest::Approx(0.75));

    // matrix measure accounting: the slit mesh still covers the unit square
    CHECK(mesh.subdomain(2, 1).measure() == doctest::Approx(1.0).epsilon(1e-12));
    // fracture measures match the segment lengths
    CHECK(mesh.subdomain(1, 7).measure() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mesh.subdomain(1, 5).measure() == doctest::Approx(std::sqrt(0.625)).epsilon(1e-12));

    // the intersection point couples to five fracture endpoints
    int point_sides = 0;
    for (const auto& itf : mesh.interfaces)
        if (itf.dim == 0) ++point_sides;
    CHECK(point_sides == 5);

    // non-matching sides: traces of the two sides differ along every fracture
    for (int id = 1; id <= 7; ++id) {
        std::map<int, std::vector<double>> side_breaks;
        for (const auto& itf : mesh.interfaces) {
            if (itf.dim != 1 || itf.lower_id != id) continue;
            const Subdomain& up = mesh.subdomain(2, itf.upper_id);
            for (int f : itf.upper_facets)
                side_breaks[itf.side].push_back(up.facet_measure[f]);
        }
        REQUIRE(side_breaks.size() == 2);
        std::sort(side_breaks[0].begin(), side_breaks[0].end());
        std::sort(side_breaks[1].begin(), side_breaks[1].end());
        CHECK(side_breaks[0] != side_breaks[1]);
    }
}

TEST_CASE("single-fracture-2d matching option aligns the side traces") {
    MeshOptions opt;
    opt.matching_sides = true;
    MixedDimMesh mesh = build_benchmark_mesh("single-fracture-2d", 1, opt);
    mesh.validate();
    for (const auto& itf : mesh.interfaces)
        for (const auto& ov : itf.overlaps) {
            REQUIRE(ov.size() == 1);
            CHECK(ov[0].second == doctest::Approx(0.1)); // level-1 matching cells
        }
}

TEST_CASE("refinement is nested and measure preserving") {
    for (const char* preset : {"square2d", "single-fracture-2d", "cube3d"}) {
        MixedDimMesh coarse = build_benchmark_mesh(preset, 0);
        RefinementMap map;
        MixedDimMesh fine = refine(coarse, &map);
        fine.validate();
        CHECK(fine.refinement_level == 1);
        for (size_t si = 0; si < coarse.subdomains.size(); ++si) {
            const Subdomain& cs = coarse.subdomains[si];
            const Subdomain& fs = fine.subdomains[si];
            if (cs.dim > 0) CHECK(fs.n_cells() == cs.n_cells() * (1 << cs.dim));
            std::vector<double> child_sum(cs.n_cells(), 0.0);
            for (int c = 0; c < fs.n_cells(); ++c) child_sum[map.cell_parent[si][c]] += fs.cell_measure[c];
            for (int c = 0; c < cs.n_cells(); ++c)
                CHECK(child_sum[c] == doctest::Approx(cs.cell_measure[c]).epsilon(1e-12));
            // facet children lie on their parents and halve per direction
            for (int f = 0; f < fs.n_facets(); ++f) {
                int pf = map.facet_parent[si][f];
                if (pf < 0) continue;
                CHECK(fs.facet_tags[f] == cs.facet_tags[pf]);
            }
        }
    }
}

TEST_CASE("red refinement of the unit shapes") {
    // interval [0,1] -> [0,0.5],[0.5,1]; unit triangle -> 4 congruent children
    MixedDimMesh m = build_benchmark_mesh("unfractured-2d", 1);
    CHECK(m.subdomains[0].n_cells() == 8);
    for (double v : m.subdomains[0].cell_measure) CHECK(v == doctest::Approx(0.125));

    MixedDimMesh f = build_benchmark_mesh("single-fracture-2d", 1);
    const Subdomain& frac = f.subdomain(1, 1);
    CHECK(frac.n_cells() == 10);
    for (int c = 0; c < frac.n_cells(); ++c) CHECK(frac.cell_measure[c] == doctest::Approx(0.1));
}

TEST_CASE("cube3d refinement multiplies 3D cells by 8") {
    MixedDimMesh c0 = build_benchmark_mesh("cube3d", 0);
    MixedDimMesh c1 = build_benchmark_mesh("cube3d", 1);
    for (int id = 1; id <= 8; ++id)
        CHECK(c1.subdomain(3, id).n_cells() == 8 * c0.subdomain(3, id).n_cells());
    c1.validate();
}

TEST_CASE("attach_scaling derives the aperture fields") {
    MixedDimMesh mesh = build_benchmark_mesh("square2d", 1);
    ScalingFields fields = attach_scaling(mesh, default_parameters("square2d"));

    // matrix cells are unscaled
    int mi = mesh.subdomain_index(2, 1);
    for (double e : fields.sub[mi].eps_mid) CHECK(e == 1.0);
    for (double e : fields.sub[mi].eps_hat_max) CHECK(e == 1.0);

    // pinch-out law: gamma(x1 = 1) = 0.01 * (2 * 0.5)^4 = 0.01
    const FeatureParams& f7 = default_parameters("square2d").at(1, 7);
    CHECK(f7.gamma.eval(1.0) == doctest::Approx(0.01));
    CHECK(f7.gamma.eval(0.3) == 0.0);

    // eps = (2 gamma)^{1/2} on 1D features in 2D
    int i5 = mesh.subdomain_index(1, 5);
    for (double e : fields.sub[i5].eps_mid) CHECK(e == doctest::Approx(std::sqrt(0.02)));

    // zero-aperture cells of the virtual extension have eps = 0 and eps_hat = 1
    int i7 = mesh.subdomain_index(1, 7);
    const Subdomain& s7 = mesh.subdomain(1, 7);
    bool saw_zero = false;
    for (int c = 0; c < s7.n_cells(); ++c) {
        if (s7.cell_centroid_local[c](0) < 0.5) {
            CHECK(fields.sub[i7].eps_mid[c] == 0.0);
            saw_zero = true;
        }
    }
    CHECK(saw_zero);
    for (size_t ii = 0; ii < mesh.interfaces.size(); ++ii) {
        if (mesh.interfaces[ii].dim == 1)
            for (double eh : fields.itf[ii].eps_hat) CHECK(eh == 1.0); // matrix trace
        if (mesh.interfaces[ii].dim == 0)
            for (double eh : fields.itf[ii].eps_hat)
                CHECK(eh == doctest::Approx(std::sqrt(0.02))); // fracture trace at the point
    }

    // eps_e dominates eps pointwise
    for (size_t si = 0; si < mesh.subdomains.size(); ++si)
        for (size_t c = 0; c < fields.sub[si].eps_mid.size(); ++c)
            CHECK(fields.sub[si].eps_e[c] >= fields.sub[si].eps_mid[c] - 1e-15);

    // negative gamma and non-SPD K are rejected
    ParameterTable bad = default_parameters("square2d");
    bad.features[{1, 6}].gamma = GammaLaw::constant(-1.0);
    CHECK_THROWS(attach_scaling(mesh, bad));
    bad = default_parameters("square2d");
    bad.features[{2, 1}].K = 0.0;
    CHECK_THROWS(attach_scaling(mesh, bad));
}

TEST_CASE("gradient bound diagnostic") {
    MixedDimMesh mesh = build_benchmark_mesh("square2d", 3);
    ScalingFields fields = attach_scaling(mesh, default_parameters("square2d"));
    auto rep = validate_gradient_bound(mesh, fields, 10.0);
    CHECK_FALSE(rep.violated);
    // the quartic pinch-out has |d(eps)/ds| / sqrt(eps) = 4 * 0.02^(1/4) everywhere
    double expected = 4.0 * std::pow(0.02, 0.25);
    CHECK(rep.per_subdomain.at({1, 7}) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(rep.max_ratio <= 10.0);

    // constant-aperture fields have zero ratio
    MixedDimMesh sf = build_benchmark_mesh("single-fracture-2d", 1);
    auto rep2 = validate_gradient_bound(sf, attach_scaling(sf, default_parameters("single-fracture-2d")), 10.0);
    CHECK(rep2.max_ratio == 0.0);

    // a linear law eps ~ max(s-0.5, 0) diverges near the tip under refinement
    ParameterTable lin = default_parameters("square2d");
    lin.features[{1, 7}].gamma = GammaLaw::pinchout(0.5, 1.0, 0.5, 2.0);
    // gamma = 0.5 t^2 -> eps = (2 gamma)^{1/2} = t: exactly the linear law
    double prev = 0;
    for (int lvl = 1; lvl <= 3; ++lvl) {
        MixedDimMesh m = build_benchmark_mesh("square2d", lvl);
        auto r = validate_gradient_bound(m, attach_scaling(m, lin), 10.0);
        CHECK(r.per_subdomain.at({1, 7}) > prev * 1.2);
        prev = r.per_subdomain.at({1, 7});
    }
    CHECK(prev > std::sqrt(2.0 / 0.0625)); // ratio ~ 1/sqrt(t_mid), t_mid <= h/2
}

TEST_CASE("preset errors") {
    CHECK_THROWS(build_benchmark_mesh("no-such-preset", 0));
    CHECK_THROWS(build_benchmark_mesh("square2d", 7));
    CHECK_THROWS(build_benchmark_mesh("cube3d", 5));
}

TEST_CASE("describe lists the decomposition") {
    std::string d = describe("cube3d");
    CHECK(d.find("N^3 = 8") != std::string::npos);
    CHECK(d.find("N^2 = 12") != std::string::npos);
    CHECK(d.find("N^1 = 6") != std::string::npos);
    CHECK(d.find("N^0 = 1") != std::string::npos);
    std::string s = describe("square2d");
    CHECK(s.find("N^1 = 7") != std::string::npos);
    std::string u = describe("unfractured-2d");
    CHECK(u.find("interfaces: 0") != std::string::npos);
}
