// Finite-difference solution of the boundary value problem against h(x, t) from the dual route.
#include <cmath>
#include <cstdio>

#include "fracdual/fpde_solver.hpp"
#include "fracdual/inverse_subordinator.hpp"

int main() {
    using namespace fracdual;
    SolverConfig cfg;
    cfg.alpha = 1.5;
    cfg.dx = 0.1;
    cfg.x_max = 8.0;
    cfg.dt = even_step_dt(cfg);
    const DensityGrid h = solve_bvp(cfg);

    const auto spec = InverseDensitySpec::make(1.0 / cfg.alpha, cfg.b, cfg.t_end, InverseRoute::Duality);
    double worst = 0.0;
    std::printf("%6s %14s %14s\n", "x", "fpde", "h");
    for (std::size_t i = 1; i < h.size(); ++i) {
        const double x = h.x(i);
        if (x > 4.0) break;
        const double exact = x > 0.0 ? h_density(x, spec) : h_origin_limit(spec);
        if (x >= 0.2) worst = std::max(worst, std::abs(h.values[i] - exact));
        if (i % 5 == 1) std::printf("%6.2f %14.8f %14.8f\n", x, h.values[i], exact);
    }
    std::printf("max |error| on [0.2, 4]: %.3e  (dt %.5g, mass %.6f)\n", worst, cfg.dt, h.mass());
}
