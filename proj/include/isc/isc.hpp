#pragma once

// Umbrella header for the whole toolkit.

#include "isc/circuit.hpp"
#include "isc/classify.hpp"
#include "isc/constraints.hpp"
#include "isc/dynamics.hpp"
#include "isc/errors.hpp"
#include "isc/hamiltonian.hpp"
#include "isc/io.hpp"
#include "isc/lp.hpp"
#include "isc/oracle.hpp"
#include "isc/residual.hpp"
#include "isc/rng.hpp"
#include "isc/spin.hpp"
#include "isc/synth.hpp"
#include "isc/voronoi.hpp"
