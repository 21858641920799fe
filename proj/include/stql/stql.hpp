#pragma once

#include "stql/units.hpp"
#include "stql/params.hpp"
#include "stql/registry.hpp"
#include "stql/linalg.hpp"
#include "stql/rotor.hpp"
#include "stql/hyperfine.hpp"
#include "stql/pair.hpp"
#include "stql/entangle.hpp"
#include "stql/pulses.hpp"
#include "stql/verify.hpp"
