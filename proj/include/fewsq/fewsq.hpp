#pragma once

// Binary words with few distinct squares: morphisms, base-k automata,
// square enumeration, the catalog of known constructions and the searches
// that certify them minimal.

#include "fewsq/arithprog.hpp"
#include "fewsq/constructions.hpp"
#include "fewsq/dfao.hpp"
#include "fewsq/error.hpp"
#include "fewsq/kernel.hpp"
#include "fewsq/morphism.hpp"
#include "fewsq/search.hpp"
#include "fewsq/squares.hpp"
#include "fewsq/word.hpp"
