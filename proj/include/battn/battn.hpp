#pragma once

#include "battn/attention.hpp"
#include "battn/geometry.hpp"
#include "battn/grid.hpp"
#include "battn/ingest.hpp"
#include "battn/landmark.hpp"
#include "battn/losses.hpp"
#include "battn/metrics.hpp"
#include "battn/raster.hpp"
