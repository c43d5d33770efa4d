#pragma once

#include "bbmlab/config.hpp"
#include "bbmlab/convolution.hpp"
#include "bbmlab/energy_derivative.hpp"
#include "bbmlab/error.hpp"
#include "bbmlab/experiments.hpp"
#include "bbmlab/fft.hpp"
#include "bbmlab/field.hpp"
#include "bbmlab/flow.hpp"
#include "bbmlab/parallel.hpp"
#include "bbmlab/sampler.hpp"
#include "bbmlab/stats.hpp"
#include "bbmlab/suite.hpp"
#include "bbmlab/summation.hpp"
#include "bbmlab/symbols.hpp"
#include "bbmlab/wick.hpp"
