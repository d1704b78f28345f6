#pragma once

#include "hypervol/arrangement.hpp"
#include "hypervol/complex.hpp"
#include "hypervol/cuts.hpp"
#include "hypervol/discrepancy.hpp"
#include "hypervol/error.hpp"
#include "hypervol/gf2.hpp"
#include "hypervol/json_io.hpp"
#include "hypervol/l1cone.hpp"
#include "hypervol/parallel.hpp"
#include "hypervol/randcx.hpp"
#include "hypervol/rng.hpp"
#include "hypervol/simplex.hpp"
#include "hypervol/sparsify.hpp"
#include "hypervol/volumes.hpp"
