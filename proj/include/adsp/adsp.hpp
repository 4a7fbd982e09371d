#pragma once

#include "adsp/anytime.hpp"
#include "adsp/exact.hpp"
#include "adsp/io.hpp"
#include "adsp/metrics.hpp"
#include "adsp/mip.hpp"
#include "adsp/model.hpp"
#include "adsp/profile.hpp"
#include "adsp/solve.hpp"
#include "adsp/types.hpp"
#include "adsp/validate.hpp"
