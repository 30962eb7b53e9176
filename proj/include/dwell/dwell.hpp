#pragma once

#include "dwell/error.hpp"
#include "dwell/params.hpp"
#include "dwell/closed_forms.hpp"
#include "dwell/grid.hpp"
#include "dwell/quadrature.hpp"
#include "dwell/trial.hpp"
#include "dwell/hierarchy.hpp"
#include "dwell/region.hpp"
#include "dwell/oracle.hpp"
#include "dwell/reference_tables.hpp"
#include "dwell/report.hpp"
#include "dwell/verify.hpp"
