#pragma once

// Umbrella header for the frugal multi-hop retrieval toolkit.

#include "frugalhop/bootstrap.hpp"
#include "frugalhop/config.hpp"
#include "frugalhop/datagen.hpp"
#include "frugalhop/errors.hpp"
#include "frugalhop/metrics.hpp"
#include "frugalhop/policy.hpp"
#include "frugalhop/policy_spec.hpp"
#include "frugalhop/qa.hpp"
#include "frugalhop/report.hpp"
#include "frugalhop/retrieval.hpp"
#include "frugalhop/reward.hpp"
#include "frugalhop/rollout.hpp"
#include "frugalhop/stop_trainer.hpp"
#include "frugalhop/text.hpp"
#include "frugalhop/version.hpp"
