#pragma once

#include "clay/convert/cubify.hpp"
#include "clay/convert/grid_placement.hpp"
#include "clay/convert/marching_cubes.hpp"
#include "clay/convert/odm.hpp"
#include "clay/convert/pointcloud_voxel.hpp"
#include "clay/convert/sampling.hpp"
#include "clay/convert/sdf.hpp"
#include "clay/convert/voxelize.hpp"
