#pragma once

#include "nullwave/config.hpp"
#include "nullwave/derivs.hpp"
#include "nullwave/diagnostics.hpp"
#include "nullwave/fft.hpp"
#include "nullwave/gamma.hpp"
#include "nullwave/ghost.hpp"
#include "nullwave/grid.hpp"
#include "nullwave/identities.hpp"
#include "nullwave/initdata.hpp"
#include "nullwave/jet.hpp"
#include "nullwave/mms.hpp"
#include "nullwave/norms.hpp"
#include "nullwave/propagator.hpp"
#include "nullwave/reduction.hpp"
#include "nullwave/runio.hpp"
#include "nullwave/snapshot.hpp"
#include "nullwave/solver.hpp"
#include "nullwave/tensor.hpp"
