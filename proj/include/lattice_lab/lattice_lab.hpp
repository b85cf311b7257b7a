#pragma once

#include "lattice_lab/lattice.hpp"
#include "lattice_lab/operator.hpp"
#include "lattice_lab/filtration.hpp"
#include "lattice_lab/martingale.hpp"
#include "lattice_lab/sampling.hpp"
#include "lattice_lab/harness.hpp"
#include "lattice_lab/io.hpp"
