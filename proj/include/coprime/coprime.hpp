#pragma once

// Umbrella header for the co-prime TDM sampling toolkit.

#include "coprime/core.hpp"
#include "coprime/diffsets.hpp"
#include "coprime/error.hpp"
#include "coprime/estimator.hpp"
#include "coprime/io.hpp"
#include "coprime/patterns.hpp"
#include "coprime/scheduler.hpp"
