#pragma once

// Umbrella header for the cmcboot library.

#include "cmcboot/bellman.hpp"
#include "cmcboot/bootstrap.hpp"
#include "cmcboot/counting.hpp"
#include "cmcboot/covariance.hpp"
#include "cmcboot/environments.hpp"
#include "cmcboot/errors.hpp"
#include "cmcboot/harness.hpp"
#include "cmcboot/indexing.hpp"
#include "cmcboot/intervals.hpp"
#include "cmcboot/parallel.hpp"
#include "cmcboot/reference_chain.hpp"
#include "cmcboot/rng.hpp"
#include "cmcboot/simulate.hpp"
#include "cmcboot/types.hpp"
