#ifndef BHC_BHC_HPP
#define BHC_BHC_HPP

#include "bhc/coloring.hpp"
#include "bhc/errors.hpp"
#include "bhc/experiments.hpp"
#include "bhc/expose_merge.hpp"
#include "bhc/greedy.hpp"
#include "bhc/hypergraph.hpp"
#include "bhc/io.hpp"
#include "bhc/iterative.hpp"
#include "bhc/matching_coloring.hpp"
#include "bhc/oracles.hpp"
#include "bhc/random.hpp"
#include "bhc/sparse_two_coloring.hpp"
#include "bhc/triple_reduction.hpp"

#endif
