#pragma once

// Umbrella header for the metricfuse library.

#include "metricfuse/bootstrap.hpp"
#include "metricfuse/csv.hpp"
#include "metricfuse/dataset.hpp"
#include "metricfuse/error.hpp"
#include "metricfuse/fusion.hpp"
#include "metricfuse/ingest.hpp"
#include "metricfuse/normalize.hpp"
#include "metricfuse/pipeline.hpp"
#include "metricfuse/report.hpp"
#include "metricfuse/rng.hpp"
#include "metricfuse/stats.hpp"
#include "metricfuse/synthetic.hpp"
#include "metricfuse/vmaf.hpp"
