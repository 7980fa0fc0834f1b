#pragma once

// Leading-digit statistics of newform coefficients at primes.

#include "density.hpp"
#include "digits.hpp"
#include "elliptic.hpp"
#include "errors.hpp"
#include "int128.hpp"
#include "newforms.hpp"
#include "ntt.hpp"
#include "parallel.hpp"
#include "primes.hpp"
#include "report.hpp"
#include "satotate.hpp"
#include "series.hpp"
#include "table_io.hpp"
