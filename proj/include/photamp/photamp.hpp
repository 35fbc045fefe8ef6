#pragma once

#include "photamp/numerics.hpp"
#include "photamp/tridiagonal_eigen.hpp"
#include "photamp/trace.hpp"
#include "photamp/hp_model.hpp"
#include "photamp/exact_model.hpp"
#include "photamp/ensembles.hpp"
