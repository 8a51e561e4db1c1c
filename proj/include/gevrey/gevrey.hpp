#pragma once

#include "gevrey/borel.hpp"
#include "gevrey/convolution.hpp"
#include "gevrey/error.hpp"
#include "gevrey/gevrey_diagnostics.hpp"
#include "gevrey/linalg.hpp"
#include "gevrey/numeric.hpp"
#include "gevrey/problem.hpp"
#include "gevrey/problem_io.hpp"
#include "gevrey/riccati_reference.hpp"
#include "gevrey/sector.hpp"
#include "gevrey/series.hpp"
#include "gevrey/solver_eps.hpp"
#include "gevrey/solver_z.hpp"
