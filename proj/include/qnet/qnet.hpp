#pragma once

#include "qnet/control.hpp"
#include "qnet/distribution.hpp"
#include "qnet/engine.hpp"
#include "qnet/noise.hpp"
#include "qnet/path.hpp"
#include "qnet/quantum.hpp"
#include "qnet/routing.hpp"
#include "qnet/scenario.hpp"
#include "qnet/topology.hpp"
