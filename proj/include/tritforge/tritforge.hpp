#pragma once

#include "error.hpp"
#include "trit.hpp"
#include "tlg.hpp"
#include "netlist.hpp"
#include "synth.hpp"
#include "cells.hpp"
#include "sim.hpp"
#include "word.hpp"
#include "oracles.hpp"
#include "builders.hpp"
#include "trace_io.hpp"
#include "cost.hpp"
