#pragma once

#include "igahelm/assembly.hpp"
#include "igahelm/banded.hpp"
#include "igahelm/config.hpp"
#include "igahelm/dirichlet.hpp"
#include "igahelm/domains.hpp"
#include "igahelm/errors.hpp"
#include "igahelm/experiment.hpp"
#include "igahelm/geometry.hpp"
#include "igahelm/grid.hpp"
#include "igahelm/linsolve.hpp"
#include "igahelm/net_io.hpp"
#include "igahelm/postproc.hpp"
#include "igahelm/problems.hpp"
#include "igahelm/quadrature.hpp"
#include "igahelm/refine.hpp"
#include "igahelm/sparse.hpp"
#include "igahelm/spline.hpp"
