#include "qthermo/fitting.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "qthermo/bath_physics.hpp"
#include "qthermo/errors.hpp"

namespace qthermo {

FitResult weighted_linear_fit(std::span<const double> xs, std::span<const double> ys,
                              std::span<const double> y_sigmas) {
    const std::size_t n = xs.size();
    if (ys.size() != n || y_sigmas.size() != n) {
        throw DomainError("weighted_linear_fit: xs, ys and sigmas differ in length");
    }
    if (n < 3) throw DomainError("weighted_linear_fit: need at least 3 points, got " + std::to_string(n));

    double s = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sigma = y_sigmas[i];
        if (!std::isfinite(sigma) || !(sigma > 0)) {
            throw DomainError("weighted_linear_fit: sigma at point " + std::to_string(i) + " must be positive");
        }
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
            throw DomainError("weighted_linear_fit: non-finite data at point " + std::to_string(i));
        }
        const double w = 1.0 / (sigma * sigma);
        s += w;
        sx += w * xs[i];
        sy += w * ys[i];
    }
    // sums about the weighted mean abscissa
    const double xbar = sx / s;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 1.0 / (y_sigmas[i] * y_sigmas[i]);
        const double dx = xs[i] - xbar;
        sxx += w * dx * dx;
        sxy += w * dx * ys[i];
    }
    if (!(sxx > 1e-14 * s * (xbar * xbar + 1.0))) {
        throw DomainError("weighted_linear_fit: abscissae have no spread");
    }

    FitResult fit;
    fit.points = n;
    fit.slope = sxy / sxx;
    fit.offset = sy / s - fit.slope * xbar;
    const double var_slope = 1.0 / sxx;
    fit.slope_error = std::sqrt(var_slope);
    fit.offset_error = std::sqrt(1.0 / s + xbar * xbar * var_slope);
    fit.covariance = -xbar * var_slope;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (ys[i] - fit.slope * xs[i] - fit.offset) / y_sigmas[i];
        fit.chi2 += r * r;
    }
    return fit;
}

FitResult linear_fit(std::span<const double> xs, std::span<const double> ys) {
    const std::vector<double> ones(xs.size(), 1.0);
    return weighted_linear_fit(xs, ys, ones);
}

namespace {

// Unit weights when no point carries an uncertainty.
std::vector<double> resolve_sigmas(const std::vector<double>& sigmas, const char* what) {
    bool any = false, all = true;
    for (double s : sigmas) {
        any = any || s > 0;
        all = all && s > 0;
    }
    if (!any) return std::vector<double>(sigmas.size(), 1.0);
    if (!all) throw DomainError(std::string("thermalization_analysis: some ") + what + " uncertainties are zero");
    return sigmas;
}

}  // namespace

ThermalizationFits thermalization_analysis(std::span<const ThermalizationPoint> points,
                                           const ThermalizationOptions& options) {
    detail::require_positive(options.omega_ge, "omega_ge");
    detail::require_positive(options.qp_onset_cutoff, "quasiparticle onset cutoff");

    std::vector<double> n1, g1, g1s;
    std::vector<double> nm, ne, nes;
    for (const auto& p : points) {
        const double n_eff = bose_einstein(options.omega_ge, p.t_eff);
        // dn/dT = n(n+1)x/T
        const double x = reduced_energy(options.omega_ge, p.t_eff);
        const double n_sigma = n_eff * (n_eff + 1.0) * x / p.t_eff * p.t_eff_sigma;
        nm.push_back(bose_einstein(options.omega_ge, p.t_mxc));
        ne.push_back(n_eff);
        nes.push_back(n_sigma);
        if (p.t_mxc < options.qp_onset_cutoff) {
            n1.push_back(n_eff);
            g1.push_back(p.gamma1);
            g1s.push_back(p.gamma1_sigma);
        }
    }
    if (n1.size() < 3) {
        throw DomainError("thermalization_analysis: fewer than 3 points below the quasiparticle onset cutoff");
    }
    if (ne.size() < 3) throw DomainError("thermalization_analysis: fewer than 3 points");

    ThermalizationFits fits;
    fits.gamma1_vs_n = weighted_linear_fit(n1, g1, resolve_sigmas(g1s, "gamma1"));
    fits.n_eff_vs_n_mxc = weighted_linear_fit(nm, ne, resolve_sigmas(nes, "temperature"));
    return fits;
}

}  // namespace qthermo
