#pragma once

#include "starfree/logic/formula.hpp"
#include "starfree/logic/num.hpp"
#include "starfree/logic/sf.hpp"
