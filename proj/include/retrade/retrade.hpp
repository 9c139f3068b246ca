#pragma once

// Umbrella header: market surplus math, double-auction and speculative-market
// simulators, heavy-tail statistics, and the no-arbitrage test bench.

#include "retrade/auction.hpp"
#include "retrade/config.hpp"
#include "retrade/distributions.hpp"
#include "retrade/errors.hpp"
#include "retrade/kesten.hpp"
#include "retrade/money.hpp"
#include "retrade/news.hpp"
#include "retrade/panel.hpp"
#include "retrade/population.hpp"
#include "retrade/returns.hpp"
#include "retrade/rng.hpp"
#include "retrade/series_io.hpp"
#include "retrade/stats.hpp"
#include "retrade/strategy.hpp"
#include "retrade/surplus.hpp"
#include "retrade/tail_stats.hpp"
#include "retrade/trend_market.hpp"
#include "retrade/version.hpp"
#include "retrade/wealth.hpp"
