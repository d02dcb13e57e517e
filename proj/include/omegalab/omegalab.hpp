#pragma once

#include "omegalab/bit_string.hpp"
#include "omegalab/classification.hpp"
#include "omegalab/codec.hpp"
#include "omegalab/complexity.hpp"
#include "omegalab/dyadic.hpp"
#include "omegalab/errors.hpp"
#include "omegalab/explore.hpp"
#include "omegalab/machine.hpp"
#include "omegalab/omega.hpp"
#include "omegalab/oracle.hpp"
#include "omegalab/register.hpp"
#include "omegalab/snapshot.hpp"
