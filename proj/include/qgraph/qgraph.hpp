#pragma once

#include "qgraph/numerics.hpp"
#include "qgraph/vertex.hpp"
#include "qgraph/star.hpp"
#include "qgraph/lattice.hpp"
#include "qgraph/bands.hpp"
#include "qgraph/verify.hpp"
