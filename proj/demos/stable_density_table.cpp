// Prints a few stable densities next to their closed forms.
#include <cmath>
#include <cstdio>
#include <numbers>

#include "fracdual/stable_density.hpp"

int main() {
    using namespace fracdual;
    std::printf("%8s %18s %18s %18s\n", "x", "alpha=2", "gauss", "alpha=1.5,eta=0.5");
    for (double x : linspace(-3.0, 3.0, 13)) {
        const double g = std::exp(-x * x / 4.0) / std::sqrt(4.0 * std::numbers::pi);
        std::printf("%8.3f %18.15f %18.15f %18.15f\n", x, density(x, zolotarev(2.0, 0.0)), g,
                    density(x, zolotarev(1.5, 0.5)));
    }
    // Levy law as the alpha = 1/2 totally skewed case
    std::printf("\nLevy x=1: %.15f vs %.15f\n", density(1.0, zolotarev(0.5, 0.5)),
                std::exp(-0.25) / (2.0 * std::sqrt(std::numbers::pi)));
}
