#pragma once

#include "twolayer/core.hpp"
#include "twolayer/driver.hpp"
#include "twolayer/eigen.hpp"
#include "twolayer/errors.hpp"
#include "twolayer/frame.hpp"
#include "twolayer/quartic.hpp"
#include "twolayer/riemann.hpp"
#include "twolayer/scenarios.hpp"
#include "twolayer/swe1l.hpp"
