#pragma once

#include "agm/rational.hpp"
#include "agm/poly.hpp"
#include "agm/tensor.hpp"
#include "agm/connection.hpp"
#include "agm/mapping.hpp"
#include "agm/invariants.hpp"
#include "agm/verify.hpp"
#include "agm/objects.hpp"
#include "agm/json_io.hpp"
