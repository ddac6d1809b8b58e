#pragma once

#include "netsift/errors.hpp"
#include "netsift/experiment.hpp"
#include "netsift/filtration.hpp"
#include "netsift/io.hpp"
#include "netsift/network.hpp"
#include "netsift/parallel.hpp"
#include "netsift/rng.hpp"
#include "netsift/stats.hpp"
#include "netsift/uncertainty.hpp"
