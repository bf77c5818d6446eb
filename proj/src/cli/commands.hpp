#pragma once

#include "config.hpp"

namespace cli {

int cmd_timeseries(const RunConfig& cfg);
int cmd_fdos(const RunConfig& cfg);
int cmd_sample(const RunConfig& cfg);
int cmd_resources(const RunConfig& cfg);
int cmd_mitigate(const RunConfig& cfg);

}  // namespace cli
