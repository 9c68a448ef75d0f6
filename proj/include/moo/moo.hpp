#pragma once

#include "moo/bench.hpp"
#include "moo/core.hpp"
#include "moo/dataio.hpp"
#include "moo/evolution.hpp"
#include "moo/genesel.hpp"
#include "moo/problems.hpp"
#include "moo/ranking.hpp"
