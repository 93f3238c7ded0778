#pragma once

#include "gantry/schedule.hpp"
#include "gantry/fitness.hpp"
#include "gantry/repair.hpp"
#include "gantry/classical_ga.hpp"
#include "gantry/quantum_ga.hpp"
#include "gantry/sweep.hpp"
#include "gantry/io.hpp"
#include "gantry/cli.hpp"
