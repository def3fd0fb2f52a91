#pragma once

#include "tacmab/allocation.hpp"
#include "tacmab/baselines.hpp"
#include "tacmab/ctac.hpp"
#include "tacmab/dtac.hpp"
#include "tacmab/env.hpp"
#include "tacmab/errors.hpp"
#include "tacmab/harness/batch.hpp"
#include "tacmab/harness/config.hpp"
#include "tacmab/harness/csv.hpp"
#include "tacmab/harness/experiments.hpp"
#include "tacmab/harness/svg.hpp"
#include "tacmab/harness/trial.hpp"
#include "tacmab/planner.hpp"
