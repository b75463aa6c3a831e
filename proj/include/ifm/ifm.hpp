#pragma once
// Umbrella header for the simulation library (the CLI lives in ifm/cli.hpp).

#include "ifm/apertures.hpp"
#include "ifm/format.hpp"
#include "ifm/fresnel.hpp"
#include "ifm/grid.hpp"
#include "ifm/inference.hpp"
#include "ifm/momentum.hpp"
#include "ifm/montecarlo.hpp"
#include "ifm/parallel.hpp"
#include "ifm/pattern.hpp"
#include "ifm/screen.hpp"
#include "ifm/status.hpp"
#include "ifm/zeno.hpp"
