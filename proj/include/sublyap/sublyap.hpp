#pragma once

#include "classifier.hpp"
#include "error.hpp"
#include "fourier.hpp"
#include "int_polynomial.hpp"
#include "lyapunov.hpp"
#include "mahler.hpp"
#include "orbit.hpp"
#include "report_json.hpp"
#include "substitution.hpp"
