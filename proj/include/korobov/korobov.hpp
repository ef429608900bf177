#pragma once

#include "korobov/errors.hpp"
#include "korobov/numeric.hpp"
#include "korobov/sequence.hpp"
#include "korobov/space.hpp"
#include "korobov/spectrum.hpp"
#include "korobov/minimal_errors.hpp"
#include "korobov/grid.hpp"
#include "korobov/spline.hpp"
#include "korobov/tractability.hpp"
