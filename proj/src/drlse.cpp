#include "mrpi/drlse.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mrpi/imaging.hpp"

namespace mrpi {

namespace {

constexpr double kGradientRegularizer = 1e-10;

double norm(double dx, double dy) noexcept { return std::sqrt(dx * dx + dy * dy); }

double regularized_norm(double dx, double dy) noexcept {
    return std::sqrt(dx * dx + dy * dy + kGradientRegularizer);
}

void require_finite(const Grid<double>& f, const char* what) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!std::isfinite(f[i])) {
            throw DivergenceError(std::string(what) + " is non-finite at pixel (" +
                                  std::to_string(i % static_cast<std::size_t>(f.width())) + ", " +
                                  std::to_string(i / static_cast<std::size_t>(f.width())) + ")");
        }
    }
}

}  // namespace

void DrlseParams::validate() const {
    auto fail = [](const std::string& msg) { throw ParameterError("drlse: " + msg); };
    if (!(mu > 0.0)) fail("mu must be positive");
    if (!(lambda >= 0.0)) fail("lambda must be non-negative");
    if (!std::isfinite(alpha_area)) fail("alpha_area must be finite");
    if (!(epsilon >= 1.0)) fail("epsilon must be at least 1 pixel");
    if (!(dt > 0.0)) fail("dt must be positive");
    if (!(mu * dt < 0.25)) {
        fail("mu * dt = " + std::to_string(mu * dt) + " violates the stability bound mu * dt < 0.25");
    }
    if (!std::isfinite(mu) || !std::isfinite(lambda) || !std::isfinite(epsilon) || !std::isfinite(dt)) {
        fail("parameters must be finite");
    }
}

double smoothed_dirac(double x, double eps) noexcept {
    if (std::abs(x) > eps) return 0.0;
    return (1.0 + std::cos(std::numbers::pi * x / eps)) / (2.0 * eps);
}

double smoothed_dirac_derivative(double x, double eps) noexcept {
    if (std::abs(x) > eps) return 0.0;
    return -std::numbers::pi * std::sin(std::numbers::pi * x / eps) / (2.0 * eps * eps);
}

double smoothed_heaviside(double x, double eps) noexcept {
    if (x >= eps) return 1.0;
    if (x <= -eps) return 0.0;
    return 0.5 * (1.0 + x / eps + std::sin(std::numbers::pi * x / eps) / std::numbers::pi);
}

EdgeIndicator edge_indicator(const GrayImage& img, double sigma_g) {
    const auto grad = gradient(gaussian_smooth(img, sigma_g));
    EdgeIndicator g(img.width(), img.height());
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = 1.0 / (1.0 + grad.dx[i] * grad.dx[i] + grad.dy[i] * grad.dy[i]);
    }
    return g;
}

LevelSetField init_step_function(int width, int height, Rect region, double c0) {
    if (width <= 0 || height <= 0) throw ParameterError("init_step_function: empty field");
    if (!(c0 > 0.0)) throw ParameterError("init_step_function: c0 must be positive");
    if (region.width <= 0 || region.height <= 0 || region.x < 0 || region.y < 0 ||
        region.x + region.width > width || region.y + region.height > height) {
        throw ParameterError("init_step_function: region must be non-empty and inside the image");
    }
    LevelSetField phi(width, height, c0);
    for (int y = region.y; y < region.y + region.height; ++y) {
        for (int x = region.x; x < region.x + region.width; ++x) phi(x, y) = -c0;
    }
    return phi;
}

double distance_reg_energy(const Grid<double>& phi) {
    const auto grad = gradient(phi);
    double sum = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double d = norm(grad.dx[i], grad.dy[i]) - 1.0;
        sum += 0.5 * d * d;
    }
    return sum;
}

double total_energy(const LevelSetField& phi, const EdgeIndicator& g, const DrlseParams& p) {
    require_same_shape(phi, g, "total_energy");
    const auto grad = gradient(phi);
    double reg = 0.0;
    double length = 0.0;
    double area = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double s = norm(grad.dx[i], grad.dy[i]);
        reg += 0.5 * (s - 1.0) * (s - 1.0);
        length += g[i] * smoothed_dirac(phi[i], p.epsilon) * s;
        area += g[i] * smoothed_heaviside(-phi[i], p.epsilon);
    }
    return p.mu * reg + p.lambda * length + p.alpha_area * area;
}

Grid<double> energy_gradient(const LevelSetField& phi, const EdgeIndicator& g,
                             const DrlseParams& p) {
    require_same_shape(phi, g, "energy_gradient");
    const int w = phi.width();
    const int h = phi.height();
    const auto grad = gradient(phi);

    // Flux through the adjoint: mu (1 - 1/|grad|) grad + lambda g delta grad/|grad|.
    Grid<double> fx(w, h);
    Grid<double> fy(w, h);
    Grid<double> local(w, h);
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double dx = grad.dx[i];
        const double dy = grad.dy[i];
        const double r = regularized_norm(dx, dy);
        const double delta = smoothed_dirac(phi[i], p.epsilon);
        const double coeff = p.mu * (1.0 - 1.0 / r) + p.lambda * g[i] * delta / r;
        fx[i] = coeff * dx;
        fy[i] = coeff * dy;
        local[i] = p.lambda * g[i] * smoothed_dirac_derivative(phi[i], p.epsilon) * norm(dx, dy) -
                   p.alpha_area * g[i] * delta;
    }
    Grid<double> out = gradient_adjoint(fx, fy);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += local[i];
    return out;
}

LevelSetField evolve_step(const LevelSetField& phi, const EdgeIndicator& g, const DrlseParams& p) {
    p.validate();
    const auto grad_e = energy_gradient(phi, g, p);
    LevelSetField next(phi.width(), phi.height());
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = phi[i] - p.dt * grad_e[i];
    require_finite(next, "updated level set");
    return next;
}

LevelSetField evolve(LevelSetField phi, const EdgeIndicator& g, const DrlseParams& p, int steps) {
    if (steps < 0) throw ParameterError("evolve: negative step count");
    for (int s = 0; s < steps; ++s) {
        try {
            phi = evolve_step(phi, g, p);
        } catch (const DivergenceError& e) {
            throw DivergenceError(e.detail(), s, e.run());
        }
    }
    return phi;
}

MonotoneStep evolve_step_backtracking(const LevelSetField& phi, const EdgeIndicator& g,
                                      const DrlseParams& p, int max_halvings) {
    MonotoneStep out;
    out.energy_before = total_energy(phi, g, p);
    DrlseParams trial = p;
    for (int h = 0;; ++h) {
        out.phi = evolve_step(phi, g, trial);
        out.energy_after = total_energy(out.phi, g, trial);
        out.dt_used = trial.dt;
        out.halvings = h;
        if (out.energy_after <= out.energy_before || h >= max_halvings) return out;
        trial.dt *= 0.5;
    }
}

double mean_gradient_deviation(const Grid<double>& phi) {
    const auto grad = gradient(phi);
    double sum = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) sum += std::abs(norm(grad.dx[i], grad.dy[i]) - 1.0);
    return sum / static_cast<double>(phi.size());
}

}  // namespace mrpi
