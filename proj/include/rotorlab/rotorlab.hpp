#pragma once

#include "rotorlab/analytic.hpp"
#include "rotorlab/bessel.hpp"
#include "rotorlab/core_model.hpp"
#include "rotorlab/errors.hpp"
#include "rotorlab/fidelity.hpp"
#include "rotorlab/peaks.hpp"
#include "rotorlab/propagator.hpp"
#include "rotorlab/pseudoclassical_map.hpp"
#include "rotorlab/smoothing.hpp"
#include "rotorlab/summation.hpp"
