#include "mdfrac/presets.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mdfrac {

bool is_known_preset(const std::string& preset) {
    return preset == "square2d" || preset == "cube3d" || preset == "single-fracture-2d" ||
           preset == "unfractured-2d";
}

MixedDimMesh build_benchmark_mesh(const std::string& preset, int level, const MeshOptions& opt) {
    if (!is_known_preset(preset)) throw std::runtime_error("unknown preset: " + preset);
    if (level < 0) throw std::runtime_error("refinement level must be nonnegative");
    const int max_level = preset == "cube3d" ? 4 : 6;
    if (level > max_level)
        throw std::runtime_error("level " + std::to_string(level) + " beyond the declared limit " +
                                 std::to_string(max_level) + " for " + preset);
    MixedDimMesh mesh;
    if (preset == "square2d") mesh = detail::build_square2d_level0(opt);
    else if (preset == "cube3d") mesh = detail::build_cube3d_level0(opt);
    else if (preset == "single-fracture-2d") mesh = detail::build_single_fracture_level0(opt);
    else mesh = detail::build_unfractured_level0(opt);
    for (int l = 0; l < level; ++l) mesh = refine(mesh);
    return mesh;
}

ParameterTable default_parameters(const std::string& preset) {
    ParameterTable t;
    auto set = [&](int dim, int id, double K, double K_nu, GammaLaw g) {
        t.features[{dim, id}] = FeatureParams{K, K_nu, g};
    };
    if (preset == "square2d") {
        set(2, 1, 1.0, 1.0, GammaLaw::constant(1.0));
        for (int id = 1; id <= 5; ++id) set(1, id, 100.0, 100.0, GammaLaw::constant(0.01));
        set(1, 6, 0.01, 0.01, GammaLaw::constant(0.01));
        set(1, 7, 0.01, 0.01, GammaLaw::pinchout(0.01, 2.0, 0.5, 4.0));
        set(0, 1, 100.0, 100.0, GammaLaw::constant(0.01));
    } else if (preset == "cube3d") {
        for (int id = 1; id <= 8; ++id) set(3, id, 1.0, 1.0, GammaLaw::constant(1.0));
        for (int id = 1; id <= 12; ++id) set(2, id, 100.0, 100.0, GammaLaw::constant(0.01));
        for (int id = 1; id <= 6; ++id) set(1, id, 100.0, 100.0, GammaLaw::constant(0.01));
        set(0, 1, 100.0, 100.0, GammaLaw::constant(0.01));
    } else if (preset == "single-fracture-2d") {
        set(2, 1, 1.0, 1.0, GammaLaw::constant(1.0));
        set(1, 1, 1.0, 0.01, GammaLaw::constant(0.01));
    } else if (preset == "unfractured-2d") {
        set(2, 1, 1.0, 1.0, GammaLaw::constant(1.0));
    } else {
        throw std::runtime_error("unknown preset: " + preset);
    }
    return t;
}

ProblemData problem_data_by_name(const std::string& name) {
    ProblemData d;
    d.name = name;
    if (name == "unit-drop-y") {
        d.dirichlet = [](const VecX& x) { return 1.0 - x(1); };
        d.source = [](const VecX&, int) { return 0.0; };
    } else if (name == "unit-drop-x") {
        d.dirichlet = [](const VecX& x) { return 1.0 - x(0); };
        d.source = [](const VecX&, int) { return 0.0; };
    } else if (name == "cubic-3d") {
        d.dirichlet = [](const VecX& x) { return x(2) * (x(0) * x(0) + x(1)); };
        d.source = [](const VecX&, int) { return 0.0; };
    } else if (name == "manufactured-sin") {
        d.dirichlet = [](const VecX& x) {
            return std::sin(M_PI * x(0)) * std::sin(M_PI * x(1));
        };
        d.source = [](const VecX& x, int) {
            return 2.0 * M_PI * M_PI * std::sin(M_PI * x(0)) * std::sin(M_PI * x(1));
        };
    } else {
        throw std::runtime_error("unknown boundary-data selector: " + name);
    }
    return d;
}

ProblemData default_problem_data(const std::string& preset) {
    if (preset == "square2d" || preset == "unfractured-2d") return problem_data_by_name("unit-drop-y");
    if (preset == "single-fracture-2d") return problem_data_by_name("unit-drop-x");
    if (preset == "cube3d") return problem_data_by_name("cubic-3d");
    throw std::runtime_error("unknown preset: " + preset);
}

std::string describe(const std::string& preset) {
    MixedDimMesh mesh = build_benchmark_mesh(preset, 0);
    ParameterTable params = default_parameters(preset);
    std::ostringstream os;
    os << preset << ": ambient dimension " << mesh.ambient_dim << "\n";
    for (int d = mesh.ambient_dim; d >= 0; --d)
        os << "  N^" << d << " = " << mesh.n_subdomains(d) << "\n";
    os << "  interfaces: " << mesh.interfaces.size() << "\n";
    os << "  feature parameters (K, K_nu, gamma):\n";
    for (const auto& s : mesh.subdomains) {
        const FeatureParams& fp = params.at(s.dim, s.id);
        os << "    Omega^" << s.dim << "_" << s.id << ": K=" << fp.K;
        if (s.dim < mesh.ambient_dim) {
            os << ", K_nu=" << fp.K_nu << ", gamma=";
            if (fp.gamma.kind == GammaLaw::Kind::Constant) os << fp.gamma.value;
            else
                os << fp.gamma.coef << "*(" << fp.gamma.scale << "*max(s-" << fp.gamma.s0
                   << ",0))^" << fp.gamma.power;
        }
        os << ", cells=" << s.n_cells() << "\n";
    }
    return os.str();
}

} // namespace mdfrac
