#pragma once

#include <lexbdd/edge.hpp>
#include <lexbdd/store.hpp>
#include <lexbdd/dot.hpp>
#include <lexbdd/satcount.hpp>
#include <lexbdd/rank.hpp>
#include <lexbdd/split.hpp>
#include <lexbdd/search.hpp>
#include <lexbdd/formula.hpp>
#include <lexbdd/game.hpp>
#include <lexbdd/report.hpp>
