#ifndef GKDV_GKDV_HPP
#define GKDV_GKDV_HPP

#include "gkdv/banded.hpp"
#include "gkdv/config.hpp"
#include "gkdv/csv.hpp"
#include "gkdv/energy.hpp"
#include "gkdv/errors.hpp"
#include "gkdv/experiments.hpp"
#include "gkdv/grid.hpp"
#include "gkdv/model.hpp"
#include "gkdv/operators.hpp"
#include "gkdv/stepper.hpp"

#endif
