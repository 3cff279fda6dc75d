#pragma once

#include "cutofflab/chain.hpp"
#include "cutofflab/curvature.hpp"
#include "cutofflab/cutoff.hpp"
#include "cutofflab/errors.hpp"
#include "cutofflab/functionals.hpp"
#include "cutofflab/geometry.hpp"
#include "cutofflab/models.hpp"
#include "cutofflab/parallel.hpp"
#include "cutofflab/transport.hpp"
