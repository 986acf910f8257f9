#pragma once

#include "mdfrac/mesh.hpp"

#include <functional>
#include <map>
#include <optional>

namespace mdfrac {

/// Half-aperture law along a subdomain, parametrized by the first local
/// coordinate (arclength for d = 1). Constant laws cover every spatial
/// dimension; the pinch-out law models gamma = coef*(scale*max(s-s0,0))^power.
struct GammaLaw {
    enum class Kind { Constant, Pinchout } kind = Kind::Constant;
    double value = 0.0;                              // Constant
    double coef = 0, scale = 0, s0 = 0, power = 1;   // Pinchout

    static GammaLaw constant(double v) {
        GammaLaw g;
        g.kind = Kind::Constant;
        g.value = v;
        return g;
    }
    static GammaLaw pinchout(double coef, double scale, double s0, double power) {
        GammaLaw g;
        g.kind = Kind::Pinchout;
        g.coef = coef;
        g.scale = scale;
        g.s0 = s0;
        g.power = power;
        return g;
    }
    double eval(double s) const;
    double deriv(double s) const;
};

/// Per-feature material data. K is the tangential permeability (isotropic
/// scalar here; attach_scaling expands it to a d x d tensor), K_nu the
/// normal permeability used on the feature's interfaces.
struct FeatureParams {
    double K = 1.0;
    double K_nu = 1.0;
    GammaLaw gamma = GammaLaw::constant(0.0);
};

struct ParameterTable {
    // keyed by (dim, id); the top-dimensional entries only use K
    std::map<std::pair<int, int>, FeatureParams> features;
    /// Exponent p in eps = (2 gamma)^p; negative means the default (n-d)/2.
    double eps_power_override = -1.0;

    const FeatureParams& at(int dim, int id) const;
};

struct SubdomainScaling {
    std::vector<double> eps_mid;     // eps at cell midpoint
    std::vector<VecX> grad_eps;      // local-frame gradient, per cell
    std::vector<double> eps_e;       // elementwise sup of eps
    std::vector<double> eps_hat_max; // designated positive-aperture trace
    std::vector<MatX> K;             // d x d SPD, per cell (empty for d = 0)
};

struct InterfaceScaling {
    std::vector<double> gamma;   // per mortar cell
    std::vector<double> K_nu;    // per mortar cell
    std::vector<double> eps_hat; // trace of eps from the upper side
};

struct ScalingFields {
    std::vector<SubdomainScaling> sub; // indexed like mesh.subdomains
    std::vector<InterfaceScaling> itf; // indexed like mesh.interfaces
};

/// Derive all scaling fields from the parameter table. eps is computed from
/// gamma by the power law, forced to eps = gamma = 1 on the top dimension;
/// eps_hat, eps_hat_max and eps_e follow. Rejects negative gamma and
/// non-positive K / K_nu.
ScalingFields attach_scaling(const MixedDimMesh& mesh, const ParameterTable& params);

struct GradientBoundReport {
    double max_ratio = 0.0; // max over cells of |grad eps| / sqrt(eps)
    bool violated = false;
    std::map<std::pair<int, int>, double> per_subdomain;
};

/// Diagnostic for the aperture-gradient growth condition. Cells with
/// eps = 0 fall back to one-sided neighbor values.
GradientBoundReport validate_gradient_bound(const MixedDimMesh& mesh, const ScalingFields& fields,
                                            double constant = 10.0);

} // namespace mdfrac
