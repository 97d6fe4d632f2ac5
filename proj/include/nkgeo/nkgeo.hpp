#pragma once

#include "nkgeo/errors.hpp"
#include "nkgeo/geodesic.hpp"
#include "nkgeo/integrator.hpp"
#include "nkgeo/manifold.hpp"
#include "nkgeo/quaternion.hpp"
#include "nkgeo/rational.hpp"
#include "nkgeo/sampling.hpp"
#include "nkgeo/verify.hpp"
