#pragma once

// Umbrella header: the whole library and the example pipelines.

#include "cdpoly/errors.hpp"
#include "cdpoly/rational.hpp"
#include "cdpoly/monomial.hpp"
#include "cdpoly/polynomial.hpp"
#include "cdpoly/poly_io.hpp"
#include "cdpoly/matrix.hpp"
#include "cdpoly/linalg.hpp"
#include "cdpoly/column.hpp"
#include "cdpoly/ideal.hpp"
#include "cdpoly/curves.hpp"
#include "cdpoly/quadrature.hpp"
#include "cdpoly/moments.hpp"
#include "cdpoly/orthonorm.hpp"
#include "cdpoly/cdkernel.hpp"
#include "cdpoly/report.hpp"
#include "cdpoly/examples/common.hpp"
#include "cdpoly/examples/ops1d.hpp"
#include "cdpoly/examples/circle.hpp"
#include "cdpoly/examples/lemniscate.hpp"
#include "cdpoly/examples/favard1d.hpp"
#include "cdpoly/examples/tensor.hpp"
#include "cdpoly/examples/generic.hpp"
