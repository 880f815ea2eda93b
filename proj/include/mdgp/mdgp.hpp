#pragma once

#include "mdgp/core.hpp"
#include "mdgp/decode.hpp"
#include "mdgp/demonstrate.hpp"
#include "mdgp/error.hpp"
#include "mdgp/heuristic.hpp"
#include "mdgp/instance_io.hpp"
#include "mdgp/model.hpp"
#include "mdgp/partitions.hpp"
#include "mdgp/report.hpp"
#include "mdgp/rng.hpp"
#include "mdgp/solver.hpp"
