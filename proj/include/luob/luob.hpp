#pragma once

// Umbrella header: the whole library in dependency order.
#include "luob/core.hpp"
#include "luob/operators.hpp"
#include "luob/polynomial.hpp"
#include "luob/projective.hpp"
#include "luob/pencil.hpp"
#include "luob/cubic.hpp"
#include "luob/locus.hpp"
#include "luob/fixtures.hpp"
#include "luob/simcheck.hpp"
#include "luob/io.hpp"
