#pragma once

#include "ldoi/core.hpp"
#include "ldoi/triple.hpp"
#include "ldoi/families.hpp"
#include "ldoi/basis.hpp"
#include "ldoi/assignment.hpp"
#include "ldoi/measurements.hpp"
#include "ldoi/bounds.hpp"
#include "ldoi/block_sdp.hpp"
#include "ldoi/ppt_sdp.hpp"
#include "ldoi/random.hpp"
#include "ldoi/io.hpp"
#include "ldoi/report.hpp"
