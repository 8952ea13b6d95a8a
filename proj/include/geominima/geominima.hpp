#pragma once

#include "core.hpp"
#include "hull.hpp"
#include "grid.hpp"
#include "bodies.hpp"
#include "measures.hpp"
#include "functionals.hpp"
#include "optimize.hpp"
#include "geominimal.hpp"
#include "random.hpp"
#include "json_io.hpp"
#include "harness.hpp"
