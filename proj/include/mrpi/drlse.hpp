#pragma once

#include "mrpi/grid.hpp"

namespace mrpi {

/// Level set function phi. Negative inside the contour, positive outside.
class LevelSetField : public Grid<double> {
public:
    using Grid::Grid;
    LevelSetField() = default;
    explicit LevelSetField(Grid<double> g) : Grid(std::move(g)) {}
};

/// Edge-stopping function g = 1 / (1 + |grad(G_sigma * I)|^2), values in (0, 1].
class EdgeIndicator : public Grid<double> {
public:
    using Grid::Grid;
    EdgeIndicator() = default;
    explicit EdgeIndicator(Grid<double> g) : Grid(std::move(g)) {}
};

/// Weights of the distance-regularized energy
///   E = mu * sum 1/2 (|grad phi| - 1)^2
///     + lambda * sum g delta_eps(phi) |grad phi|
///     + alpha_area * sum g H_eps(-phi)
/// and the explicit time step used to descend it.
struct DrlseParams {
    double mu = 0.2;
    double lambda = 5.0;
    double alpha_area = 1.5;  ///< positive shrinks the zero level set
    double epsilon = 1.5;     ///< half-width of the smoothed Dirac, in pixels
    double dt = 1.0;

    /// Throws ParameterError unless mu > 0, lambda >= 0, epsilon >= 1, dt > 0
    /// and mu * dt < 0.25.
    void validate() const;
};

/// Smoothed Dirac delta (1 + cos(pi x / eps)) / (2 eps) on |x| <= eps, else 0.
double smoothed_dirac(double x, double eps) noexcept;
double smoothed_dirac_derivative(double x, double eps) noexcept;
/// Antiderivative of smoothed_dirac, 0 below -eps and 1 above eps.
double smoothed_heaviside(double x, double eps) noexcept;

EdgeIndicator edge_indicator(const GrayImage& img, double sigma_g);

struct Rect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
};

/// phi = -c0 inside `region`, +c0 elsewhere.
LevelSetField init_step_function(int width, int height, Rect region, double c0);

/// sum over pixels of 1/2 (|grad phi| - 1)^2.
double distance_reg_energy(const Grid<double>& phi);

double total_energy(const LevelSetField& phi, const EdgeIndicator& g, const DrlseParams& p);

/// dE/dphi of total_energy, exact for the discrete energy (gradient is the
/// replicate-border central difference and its adjoint). |grad phi| is
/// regularized as sqrt(|grad phi|^2 + 1e-10) wherever it is a denominator.
Grid<double> energy_gradient(const LevelSetField& phi, const EdgeIndicator& g,
                             const DrlseParams& p);

/// One explicit Euler step phi - dt * dE/dphi. Throws DivergenceError if any
/// resulting value is non-finite.
LevelSetField evolve_step(const LevelSetField& phi, const EdgeIndicator& g, const DrlseParams& p);

/// `steps` calls to evolve_step; a DivergenceError names the failing step (0-based).
LevelSetField evolve(LevelSetField phi, const EdgeIndicator& g, const DrlseParams& p, int steps);

struct MonotoneStep {
    LevelSetField phi;
    double energy_before = 0.0;
    double energy_after = 0.0;
    double dt_used = 0.0;
    int halvings = 0;
};

/// evolve_step with step-size backtracking: dt is halved (at most max_halvings
/// times) while the energy increases. The last attempt is returned even if it
/// still increased the energy.
MonotoneStep evolve_step_backtracking(const LevelSetField& phi, const EdgeIndicator& g,
                                      const DrlseParams& p, int max_halvings = 3);

/// Mean over pixels of | |grad phi| - 1 |.
double mean_gradient_deviation(const Grid<double>& phi);

}  // namespace mrpi
