#pragma once

#include "consensus/approximations.hpp"
#include "consensus/consensus.hpp"
#include "consensus/error.hpp"
#include "consensus/planning.hpp"
#include "consensus/prior_odds.hpp"
#include "consensus/simulation.hpp"
#include "consensus/tables.hpp"
#include "consensus/types.hpp"
