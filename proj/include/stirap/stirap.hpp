#pragma once

#include "stirap/core/eigen.hpp"
#include "stirap/core/propagate.hpp"
#include "stirap/core/report.hpp"
#include "stirap/cqed/cavity.hpp"
#include "stirap/cqed/protocols.hpp"
#include "stirap/lambda/lambda_system.hpp"
#include "stirap/lambda/protocols.hpp"
#include "stirap/pulses/envelope.hpp"
#include "stirap/pulses/phase.hpp"
#include "stirap/pulses/schedule.hpp"
#include "stirap/usc/protocols.hpp"
#include "stirap/usc/rabi.hpp"
#include "stirap/version.hpp"
