#pragma once

#include "orbdiam/errors.hpp"
#include "orbdiam/field.hpp"
#include "orbdiam/linalg.hpp"
#include "orbdiam/space.hpp"
#include "orbdiam/group.hpp"
#include "orbdiam/diameter.hpp"
#include "orbdiam/power_sums.hpp"
#include "orbdiam/witness.hpp"
#include "orbdiam/families.hpp"
#include "orbdiam/io.hpp"
