#pragma once

#include "zeno/decay.hpp"
#include "zeno/errors.hpp"
#include "zeno/experiment.hpp"
#include "zeno/monte_carlo.hpp"
#include "zeno/optimize.hpp"
#include "zeno/protocols.hpp"
#include "zeno/readout.hpp"
#include "zeno/uncertainty.hpp"
