#pragma once

#include "causalkh/causality.hpp"
#include "causalkh/cube.hpp"
#include "causalkh/errors.hpp"
#include "causalkh/gf2linalg.hpp"
#include "causalkh/invariants.hpp"
#include "causalkh/linkdiag.hpp"
#include "causalkh/skies.hpp"
#include "causalkh/verify.hpp"
