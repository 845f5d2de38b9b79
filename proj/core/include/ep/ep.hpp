#pragma once

#include "ep/core.hpp"
#include "ep/diagnostics.hpp"
#include "ep/problem_io.hpp"
#include "ep/problems.hpp"
#include "ep/prox.hpp"
#include "ep/solver.hpp"
