#pragma once

#include "rrdlab/error.hpp"
#include "rrdlab/field.hpp"
#include "rrdlab/laurent.hpp"
#include "rrdlab/rational_function.hpp"
#include "rrdlab/algebraic.hpp"
#include "rrdlab/sl2.hpp"
#include "rrdlab/lattice.hpp"
#include "rrdlab/tree.hpp"
#include "rrdlab/boundary.hpp"
#include "rrdlab/spheres.hpp"
#include "rrdlab/koopman.hpp"
#include "rrdlab/criterion.hpp"
#include "rrdlab/lamplighter.hpp"
#include "rrdlab/config.hpp"
#include "rrdlab/report.hpp"
#include "rrdlab/version.hpp"
