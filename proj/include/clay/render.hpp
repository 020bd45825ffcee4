#pragma once

#include "clay/render/render.hpp"
#include "clay/render/shading.hpp"
#include "clay/render/stages.hpp"
#include "clay/render/types.hpp"
