#pragma once

#include "clay/metrics/chamfer.hpp"
#include "clay/metrics/emd.hpp"
#include "clay/metrics/iou.hpp"
#include "clay/metrics/nearest.hpp"
#include "clay/metrics/point_to_surface.hpp"
#include "clay/metrics/regularizers.hpp"
