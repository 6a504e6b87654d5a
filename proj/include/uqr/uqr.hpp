#pragma once

// Umbrella header: the whole library.

#include "uqr/classical.hpp"
#include "uqr/config.hpp"
#include "uqr/errors.hpp"
#include "uqr/expression.hpp"
#include "uqr/grid.hpp"
#include "uqr/operators.hpp"
#include "uqr/oracle.hpp"
#include "uqr/quantum_stats.hpp"
#include "uqr/relations.hpp"
#include "uqr/report.hpp"
#include "uqr/states.hpp"
#include "uqr/version.hpp"
