#pragma once

#include "fblsec/fbl_core.hpp"
#include "fblsec/lfp_model.hpp"
#include "fblsec/scenario.hpp"
#include "fblsec/scenario_json.hpp"
#include "fblsec/solvers.hpp"
#include "fblsec/bench.hpp"
