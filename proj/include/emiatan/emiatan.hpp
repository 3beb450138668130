#pragma once

#include "emiatan/big_rational.hpp"
#include "emiatan/convergence.hpp"
#include "emiatan/error.hpp"
#include "emiatan/fixed_real.hpp"
#include "emiatan/machin.hpp"
#include "emiatan/pi_reference.hpp"
#include "emiatan/precision.hpp"
#include "emiatan/quadrature.hpp"
#include "emiatan/series.hpp"
