#pragma once

#include "ric/chain.hpp"
#include "ric/corrupter.hpp"
#include "ric/datagen.hpp"
#include "ric/error.hpp"
#include "ric/graph.hpp"
#include "ric/graph_io.hpp"
#include "ric/log.hpp"
#include "ric/model.hpp"
#include "ric/moves.hpp"
#include "ric/reconstructor.hpp"
#include "ric/report.hpp"
#include "ric/rigidity.hpp"
#include "ric/stats.hpp"
#include "ric/train.hpp"
