#pragma once

#include "scopone/cards.hpp"
#include "scopone/deal.hpp"
#include "scopone/engine.hpp"
#include "scopone/experiments/report.hpp"
#include "scopone/experiments/stats.hpp"
#include "scopone/experiments/tournament.hpp"
#include "scopone/guessing.hpp"
#include "scopone/match_log.hpp"
#include "scopone/players.hpp"
#include "scopone/rules.hpp"
#include "scopone/search/common.hpp"
#include "scopone/search/ismcts.hpp"
#include "scopone/search/mcts.hpp"
