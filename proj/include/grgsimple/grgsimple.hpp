#pragma once

#include "grgsimple/bounds.hpp"
#include "grgsimple/errors.hpp"
#include "grgsimple/experiments.hpp"
#include "grgsimple/geometry.hpp"
#include "grgsimple/graph.hpp"
#include "grgsimple/oracle.hpp"
#include "grgsimple/random.hpp"
#include "grgsimple/simple.hpp"
