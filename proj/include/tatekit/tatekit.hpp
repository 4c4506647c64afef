#pragma once

#include "tatekit/abgroup.hpp"
#include "tatekit/gmodule.hpp"
#include "tatekit/global_sha.hpp"
#include "tatekit/local_field.hpp"
#include "tatekit/period_index.hpp"
#include "tatekit/splitting_bound.hpp"
