#pragma once

// Sparse hierarchically orthogonal function decomposition with greedy
// selection, and variance-based sensitivity indices for dependent inputs.

#include "hofd/basis.hpp"
#include "hofd/boosting.hpp"
#include "hofd/dictionary.hpp"
#include "hofd/errors.hpp"
#include "hofd/experiment.hpp"
#include "hofd/fit.hpp"
#include "hofd/foba.hpp"
#include "hofd/gram.hpp"
#include "hofd/io.hpp"
#include "hofd/lasso.hpp"
#include "hofd/models.hpp"
#include "hofd/quadrature.hpp"
#include "hofd/rng.hpp"
#include "hofd/sensitivity.hpp"
