#pragma once

#include "phasebound/errors.hpp"
#include "phasebound/integrator.hpp"
#include "phasebound/io.hpp"
#include "phasebound/limits.hpp"
#include "phasebound/parallel.hpp"
#include "phasebound/phase_ode.hpp"
#include "phasebound/portrait.hpp"
#include "phasebound/potential.hpp"
#include "phasebound/spectrum.hpp"
#include "phasebound/wavefunction.hpp"
