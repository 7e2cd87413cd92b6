#pragma once

#include "zk/error.hpp"
#include "zk/experiments.hpp"
#include "zk/functionals.hpp"
#include "zk/grid.hpp"
#include "zk/integrator.hpp"
#include "zk/operators.hpp"
#include "zk/version.hpp"
