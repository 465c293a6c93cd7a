#pragma once

#include "wreath/exact.hpp"
#include "wreath/freegroup.hpp"
#include "wreath/grouprep.hpp"
#include "wreath/intlin.hpp"
#include "wreath/orbits.hpp"
#include "wreath/bcmap.hpp"
#include "wreath/telescope.hpp"
#include "wreath/cli.hpp"
