// Umbrella header.
#pragma once

#include "lltkit/appendix.hpp"
#include "lltkit/bernoulli_part.hpp"
#include "lltkit/binomial.hpp"
#include "lltkit/bounds.hpp"
#include "lltkit/convolve.hpp"
#include "lltkit/factory.hpp"
#include "lltkit/gauss.hpp"
#include "lltkit/model.hpp"
#include "lltkit/numeric.hpp"
#include "lltkit/pmf.hpp"
#include "lltkit/report.hpp"
#include "lltkit/rng.hpp"
#include "lltkit/runner.hpp"
#include "lltkit/theta.hpp"
