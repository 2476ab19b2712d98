#pragma once

#include "cqt/errors.hpp"
#include "cqt/graph.hpp"
#include "cqt/io.hpp"
#include "cqt/contingency.hpp"
#include "cqt/info_metrics.hpp"
#include "cqt/matching_metrics.hpp"
#include "cqt/pair_metrics.hpp"
#include "cqt/intrinsic_metrics.hpp"
#include "cqt/parallel/engine.hpp"
#include "cqt/bench.hpp"
