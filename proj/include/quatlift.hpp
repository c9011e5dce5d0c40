#pragma once

#define QUATLIFT_VERSION "0.1.0"

#include "quatlift/arith.hpp"
#include "quatlift/matrix.hpp"
#include "quatlift/quaternion.hpp"
#include "quatlift/lattice.hpp"
#include "quatlift/enumerate.hpp"
#include "quatlift/algebra.hpp"
#include "quatlift/parallel.hpp"
#include "quatlift/ideal.hpp"
#include "quatlift/orders_p2.hpp"
#include "quatlift/brandt.hpp"
#include "quatlift/theta.hpp"
#include "quatlift/spectral.hpp"
#include "quatlift/lvalue.hpp"
#include "quatlift/gross.hpp"
#include "quatlift/pipeline.hpp"
#include "quatlift/verify.hpp"
