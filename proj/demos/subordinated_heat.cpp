// Time-fractional heat equation on the line: point source, inverse and dual mixing routes.
#include <cstdio>

#include "fracdual/subordination.hpp"

int main() {
    using namespace fracdual;
    SubordinationSpec inv;
    inv.gamma = 0.75;
    SubordinationSpec dual = inv;
    dual.route = SubordinationRoute::Dual;
    std::printf("%6s %16s %16s\n", "x", "inverse", "dual");
    for (double x : linspace(-2.0, 2.0, 9)) {
        std::printf("%6.2f %16.12f %16.12f\n", x, subordinate(inv, x, 1.0), subordinate(dual, x, 1.0));
    }
}
