#pragma once

#include "core.hpp"
#include "rng.hpp"
#include "numerics.hpp"
#include "spectrum.hpp"
#include "charfn.hpp"
#include "simulate.hpp"
#include "loctime.hpp"
#include "oracles.hpp"
#include "io.hpp"
#include "verify.hpp"
