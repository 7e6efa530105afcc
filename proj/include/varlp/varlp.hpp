#pragma once

#include "varlp/core_types.hpp"
#include "varlp/criteria.hpp"
#include "varlp/errors.hpp"
#include "varlp/gurka.hpp"
#include "varlp/harness.hpp"
#include "varlp/luxemburg.hpp"
#include "varlp/operators.hpp"
#include "varlp/profile_spec.hpp"
#include "varlp/quadrature.hpp"
#include "varlp/report.hpp"
