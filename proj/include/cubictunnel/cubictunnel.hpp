#pragma once

// Umbrella header: thermally assisted tunneling of a particle in a cubic
// metastable potential, in the semiclassical periodic-orbit approximation.

#include "cubictunnel/classical.hpp"
#include "cubictunnel/constants.hpp"
#include "cubictunnel/elliptic.hpp"
#include "cubictunnel/errors.hpp"
#include "cubictunnel/fluctuation.hpp"
#include "cubictunnel/io.hpp"
#include "cubictunnel/oracle.hpp"
#include "cubictunnel/quadrature.hpp"
#include "cubictunnel/rate.hpp"
#include "cubictunnel/units.hpp"
