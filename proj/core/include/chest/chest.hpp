#pragma once

#include "chest/channel.hpp"
#include "chest/environment.hpp"
#include "chest/estimators.hpp"
#include "chest/experiments.hpp"
#include "chest/invariants.hpp"
#include "chest/linalg.hpp"
#include "chest/metrics.hpp"
#include "chest/priors.hpp"
#include "chest/propagation.hpp"
#include "chest/random.hpp"
#include "chest/report.hpp"
#include "chest/scenario.hpp"
#include "chest/types.hpp"
