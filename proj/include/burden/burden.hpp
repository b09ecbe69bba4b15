#pragma once

// Umbrella header for the burden-of-disease modelling library.

#include "burden/aggregation.hpp"
#include "burden/bundle.hpp"
#include "burden/costing.hpp"
#include "burden/epidemiology.hpp"
#include "burden/health_loss.hpp"
#include "burden/report_io.hpp"
#include "burden/types.hpp"
#include "burden/uncertainty.hpp"
