#pragma once

#include "levyrare/numerics.hpp"
#include "levyrare/rng.hpp"
#include "levyrare/levy_model.hpp"
#include "levyrare/kernels.hpp"
#include "levyrare/params.hpp"
#include "levyrare/big_jumps.hpp"
#include "levyrare/stick_breaking.hpp"
#include "levyrare/ara.hpp"
#include "levyrare/estimators.hpp"
#include "levyrare/barrier.hpp"
#include "levyrare/summary.hpp"
#include "levyrare/parallel.hpp"
#include "levyrare/crude_mc.hpp"
#include "levyrare/diagnostic.hpp"
#include "levyrare/config.hpp"
#include "levyrare/harness.hpp"
