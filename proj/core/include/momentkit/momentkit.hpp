#pragma once

#include "momentkit/coeffsolve.hpp"
#include "momentkit/domain.hpp"
#include "momentkit/error.hpp"
#include "momentkit/funcexpr.hpp"
#include "momentkit/momentfam.hpp"
#include "momentkit/multiindex.hpp"
#include "momentkit/polynomial.hpp"
#include "momentkit/power_sign.hpp"
#include "momentkit/probes.hpp"
#include "momentkit/rational.hpp"
#include "momentkit/semigroup.hpp"
