#pragma once

#include "decompose.hpp"
#include "error.hpp"
#include "fft.hpp"
#include "geometry.hpp"
#include "harness.hpp"
#include "image.hpp"
#include "invariants.hpp"
#include "io.hpp"
#include "method.hpp"
#include "metrics.hpp"
#include "moment_file.hpp"
#include "moments.hpp"
#include "order_set.hpp"
#include "polar.hpp"
#include "radial.hpp"
#include "reconstruct.hpp"
#include "special.hpp"
#include "zeros.hpp"
