#pragma once

#include "covert/channel_model.hpp"
#include "covert/covert_rates.hpp"
#include "covert/error.hpp"
#include "covert/info_measures.hpp"
#include "covert/model_family.hpp"
#include "covert/region_optimizer.hpp"
#include "covert/sweep.hpp"
#include "covert/taylor_verify.hpp"
#include "covert/validation.hpp"
