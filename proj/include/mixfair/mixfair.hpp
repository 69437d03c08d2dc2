#ifndef MIXFAIR_MIXFAIR_HPP
#define MIXFAIR_MIXFAIR_HPP

#include "mixfair/allocation.hpp"
#include "mixfair/cake_ops.hpp"
#include "mixfair/envy_graph.hpp"
#include "mixfair/errors.hpp"
#include "mixfair/fairness.hpp"
#include "mixfair/generator.hpp"
#include "mixfair/instance.hpp"
#include "mixfair/interval_set.hpp"
#include "mixfair/json_io.hpp"
#include "mixfair/oracle.hpp"
#include "mixfair/rw_oracle.hpp"
#include "mixfair/scalar.hpp"
#include "mixfair/solvers.hpp"
#include "mixfair/trace.hpp"

#endif // MIXFAIR_MIXFAIR_HPP
