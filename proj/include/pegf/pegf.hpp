#pragma once

// Past entropy generating functions for lifetime distributions:
// closed-form and quadrature evaluation, reconstruction of a distribution
// from its tabulated generating function, plug-in estimation from data,
// and a bootstrap goodness-of-fit test for the power family.

#include "pegf/distribution.hpp"
#include "pegf/egf.hpp"
#include "pegf/errors.hpp"
#include "pegf/estimate.hpp"
#include "pegf/gof.hpp"
#include "pegf/io.hpp"
#include "pegf/quadrature.hpp"
#include "pegf/random.hpp"
#include "pegf/reconstruct.hpp"
#include "pegf/sample_data.hpp"
