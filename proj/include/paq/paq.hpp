#pragma once

#include "paq/automaton.hpp"
#include "paq/bisim.hpp"
#include "paq/errors.hpp"
#include "paq/format.hpp"
#include "paq/isomorphism.hpp"
#include "paq/lattice.hpp"
#include "paq/lp.hpp"
#include "paq/partition.hpp"
#include "paq/rational.hpp"
#include "paq/semantics.hpp"
#include "paq/subdist.hpp"
