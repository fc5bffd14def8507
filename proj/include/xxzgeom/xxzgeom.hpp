#pragma once

#include "cmat.hpp"
#include "eig.hpp"
#include "errors.hpp"
#include "xxz_model.hpp"
#include "milburn.hpp"
#include "entanglement.hpp"
#include "geometry.hpp"
#include "brachistochrone.hpp"
#include "geometric_phase.hpp"
#include "csv.hpp"
#include "config.hpp"
#include "sweep.hpp"
#include "verify.hpp"
