#pragma once
#include <altmin/certificates.hpp>
#include <altmin/error.hpp>
#include <altmin/line_search.hpp>
#include <altmin/linalg.hpp>
#include <altmin/objective.hpp>
#include <altmin/problems/composite.hpp>
#include <altmin/problems/nonlinear.hpp>
#include <altmin/problems/quadratic.hpp>
#include <altmin/prox.hpp>
#include <altmin/solvers.hpp>
#include <altmin/trace.hpp>
