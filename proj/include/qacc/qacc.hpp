#pragma once

#include "qacc/errors.hpp"
#include "qacc/opsalg.hpp"
#include "qacc/random.hpp"
#include "qacc/uncertainty.hpp"
#include "qacc/vec3.hpp"
#include "qacc/dynamics.hpp"
#include "qacc/limits.hpp"
#include "qacc/bloch.hpp"
#include "qacc/scenarios.hpp"
#include "qacc/harness.hpp"
