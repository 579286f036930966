#pragma once

// Umbrella header.

#include "tdt/boundaries.hpp"
#include "tdt/error.hpp"
#include "tdt/landau.hpp"
#include "tdt/meanfield.hpp"
#include "tdt/model.hpp"
#include "tdt/normal_phase.hpp"
#include "tdt/oracle.hpp"
#include "tdt/scaling.hpp"
#include "tdt/sweep.hpp"
#include "tdt/version.hpp"
