#pragma once

#include "fracdual/error.hpp"
#include "fracdual/numerics.hpp"
#include "fracdual/stable_params.hpp"
#include "fracdual/stable_density.hpp"
#include "fracdual/mittag_leffler.hpp"
#include "fracdual/inverse_subordinator.hpp"
#include "fracdual/fpde_solver.hpp"
#include "fracdual/monte_carlo.hpp"
#include "fracdual/subordination.hpp"
