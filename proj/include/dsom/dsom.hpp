#pragma once

#include "dsom/baselines.hpp"
#include "dsom/cluster.hpp"
#include "dsom/dispatch.hpp"
#include "dsom/errors.hpp"
#include "dsom/experiment.hpp"
#include "dsom/fitness.hpp"
#include "dsom/ga.hpp"
#include "dsom/generator.hpp"
#include "dsom/oracle.hpp"
#include "dsom/rng.hpp"
#include "dsom/scenario_io.hpp"
#include "dsom/schedulers.hpp"
