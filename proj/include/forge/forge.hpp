#pragma once

// Umbrella header for the forge finite-group engine.

#include "forge/arith.hpp"
#include "forge/canonical.hpp"
#include "forge/checks.hpp"
#include "forge/corpus.hpp"
#include "forge/error.hpp"
#include "forge/formation.hpp"
#include "forge/group.hpp"
#include "forge/groupspec.hpp"
#include "forge/lattice.hpp"
#include "forge/perm.hpp"
#include "forge/schmidt.hpp"
#include "forge/subnormal.hpp"
