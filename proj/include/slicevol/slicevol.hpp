#pragma once

#include "slicevol/curve.hpp"
#include "slicevol/divided_difference.hpp"
#include "slicevol/errors.hpp"
#include "slicevol/eval_result.hpp"
#include "slicevol/hypercube.hpp"
#include "slicevol/kernel.hpp"
#include "slicevol/node_multiset.hpp"
#include "slicevol/oracles.hpp"
#include "slicevol/simplex.hpp"
