#pragma once

#include "geometry.hpp"
#include "puzzle.hpp"
#include "io.hpp"
#include "motion.hpp"
#include "rgd.hpp"
#include "novelty.hpp"
#include "search.hpp"
#include "export.hpp"
#include "generator.hpp"
#include "bench.hpp"
#include "play.hpp"
