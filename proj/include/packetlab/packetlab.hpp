#pragma once

#include "packetlab/error.hpp"
#include "packetlab/grid.hpp"
#include "packetlab/dispersion.hpp"
#include "packetlab/wavepacket.hpp"
#include "packetlab/bigrid.hpp"
#include "packetlab/evolution.hpp"
#include "packetlab/analysis.hpp"
#include "packetlab/predictor.hpp"
#include "packetlab/expression.hpp"
#include "packetlab/scenario.hpp"
#include "packetlab/io.hpp"
#include "packetlab/runner.hpp"
