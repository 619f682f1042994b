#pragma once

#include "vanet/clustering.hpp"
#include "vanet/config.hpp"
#include "vanet/errors.hpp"
#include "vanet/graph.hpp"
#include "vanet/io.hpp"
#include "vanet/metrics.hpp"
#include "vanet/optim.hpp"
#include "vanet/pipeline.hpp"
#include "vanet/sources.hpp"
#include "vanet/sweeps.hpp"
#include "vanet/synthetic.hpp"
#include "vanet/trace.hpp"
#include "vanet/traffic.hpp"
