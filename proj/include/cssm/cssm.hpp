#pragma once

#include "cssm/autocov.hpp"
#include "cssm/critval.hpp"
#include "cssm/cusum.hpp"
#include "cssm/errors.hpp"
#include "cssm/longrun.hpp"
#include "cssm/mc.hpp"
#include "cssm/models.hpp"
#include "cssm/time_series.hpp"
