#pragma once

#include "stqp/conic.hpp"
#include "stqp/convexity.hpp"
#include "stqp/dnn.hpp"
#include "stqp/errors.hpp"
#include "stqp/exact_solver.hpp"
#include "stqp/families.hpp"
#include "stqp/generators.hpp"
#include "stqp/graph.hpp"
#include "stqp/matrix_io.hpp"
#include "stqp/report.hpp"
#include "stqp/simplex.hpp"
#include "stqp/sym_matrix.hpp"
#include "stqp/transforms.hpp"
