#pragma once

#include "fqse/csv.hpp"
#include "fqse/cycle.hpp"
#include "fqse/error.hpp"
#include "fqse/reference_table.hpp"
#include "fqse/solver.hpp"
#include "fqse/spectrum.hpp"
#include "fqse/thermo.hpp"
