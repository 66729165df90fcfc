#pragma once

#include "associator.hpp"
#include "braid.hpp"
#include "cyclic.hpp"
#include "graphs.hpp"
#include "kv.hpp"
#include "serialize.hpp"
#include "taut.hpp"
#include "tder.hpp"
#include "weights.hpp"
