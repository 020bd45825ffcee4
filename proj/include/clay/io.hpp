#pragma once

#include "clay/io/kvox.hpp"
#include "clay/io/mesh_file.hpp"
#include "clay/io/obj.hpp"
#include "clay/io/off.hpp"
#include "clay/io/png.hpp"
#include "clay/io/points.hpp"
#include "clay/io/text.hpp"
