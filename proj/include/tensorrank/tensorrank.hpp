#pragma once

#include "tensorrank/error.hpp"
#include "tensorrank/exact_arith.hpp"
#include "tensorrank/exact_linalg.hpp"
#include "tensorrank/ff_search.hpp"
#include "tensorrank/io.hpp"
#include "tensorrank/matrix.hpp"
#include "tensorrank/nss_certifier.hpp"
#include "tensorrank/parallel.hpp"
#include "tensorrank/poly.hpp"
#include "tensorrank/poly_system.hpp"
#include "tensorrank/tensor.hpp"
