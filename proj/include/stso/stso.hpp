#pragma once

#include "stso/borel_function.hpp"
#include "stso/calculus.hpp"
#include "stso/cli.hpp"
#include "stso/complex.hpp"
#include "stso/errors.hpp"
#include "stso/finite_operator.hpp"
#include "stso/gap.hpp"
#include "stso/lambda_expr.hpp"
#include "stso/measure.hpp"
#include "stso/operators.hpp"
#include "stso/opspec.hpp"
#include "stso/rational.hpp"
#include "stso/region.hpp"
#include "stso/report.hpp"
#include "stso/sampling.hpp"
#include "stso/spectrum.hpp"
#include "stso/tail_analysis.hpp"
#include "stso/vector.hpp"
