#pragma once

#include "psp/demand.hpp"
#include "psp/error.hpp"
#include "psp/experiment.hpp"
#include "psp/io.hpp"
#include "psp/numeric.hpp"
#include "psp/oracle.hpp"
#include "psp/profile.hpp"
#include "psp/region.hpp"
#include "psp/scheduler.hpp"
