#pragma once

// Umbrella header.

#include "coop/cartpole.hpp"
#include "coop/checkpoint.hpp"
#include "coop/es.hpp"
#include "coop/harness.hpp"
#include "coop/layer.hpp"
#include "coop/matrix.hpp"
#include "coop/modulation.hpp"
#include "coop/policy.hpp"
#include "coop/positional.hpp"
#include "coop/reference.hpp"
#include "coop/rng.hpp"
#include "coop/rollout.hpp"
#include "coop/run_log.hpp"
#include "coop/svg.hpp"
