#pragma once

#include "capflow/analytic_flow.hpp"
#include "capflow/errors.hpp"
#include "capflow/fluid.hpp"
#include "capflow/geometry.hpp"
#include "capflow/quadrature.hpp"
#include "capflow/special/gamma.hpp"
#include "capflow/special/hypergeometric.hpp"
