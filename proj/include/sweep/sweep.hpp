#pragma once

#include "sweep/errors.hpp"
#include "sweep/model.hpp"
#include "sweep/oracle.hpp"
#include "sweep/planner.hpp"
#include "sweep/serialization.hpp"
#include "sweep/velocity.hpp"
