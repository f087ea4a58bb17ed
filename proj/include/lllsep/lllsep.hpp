#pragma once

#include "lllsep/criteria.hpp"
#include "lllsep/dimacs.hpp"
#include "lllsep/error.hpp"
#include "lllsep/events_graph.hpp"
#include "lllsep/hj_family.hpp"
#include "lllsep/interval.hpp"
#include "lllsep/moser_tardos.hpp"
#include "lllsep/rational.hpp"
#include "lllsep/rng.hpp"
#include "lllsep/sat_model.hpp"
#include "lllsep/shearer.hpp"
