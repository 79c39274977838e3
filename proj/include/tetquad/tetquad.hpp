#pragma once

#include "tetquad/biot_savart.hpp"
#include "tetquad/geometry.hpp"
#include "tetquad/mesh.hpp"
#include "tetquad/oracle.hpp"
#include "tetquad/ring.hpp"
#include "tetquad/rules.hpp"
#include "tetquad/simplex_rule.hpp"
#include "tetquad/singular.hpp"
#include "tetquad/vec.hpp"
