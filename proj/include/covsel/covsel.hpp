#pragma once

#include "covsel/demo.hpp"
#include "covsel/errors.hpp"
#include "covsel/ingestion.hpp"
#include "covsel/matrix.hpp"
#include "covsel/pipeline.hpp"
#include "covsel/prioritization.hpp"
#include "covsel/report.hpp"
#include "covsel/selection.hpp"
#include "covsel/util.hpp"
