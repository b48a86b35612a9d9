#pragma once

#include "vcz/barriers.hpp"
#include "vcz/confinement.hpp"
#include "vcz/errors.hpp"
#include "vcz/expr.hpp"
#include "vcz/oracles.hpp"
#include "vcz/plant.hpp"
#include "vcz/qp.hpp"
#include "vcz/random_scenario.hpp"
#include "vcz/scenario.hpp"
#include "vcz/scenario_io.hpp"
#include "vcz/simulator.hpp"
#include "vcz/suite.hpp"
#include "vcz/svg_plot.hpp"
#include "vcz/trace_io.hpp"
#include "vcz/virtual_controller.hpp"
