#pragma once

// Umbrella header for the quasiperiodic nonlinear Schroedinger solver.

#include "qpnls/bench.hpp"
#include "qpnls/config.hpp"
#include "qpnls/errors.hpp"
#include "qpnls/field.hpp"
#include "qpnls/integrator.hpp"
#include "qpnls/io.hpp"
#include "qpnls/lattice.hpp"
#include "qpnls/operators.hpp"
#include "qpnls/runner.hpp"
