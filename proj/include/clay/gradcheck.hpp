#pragma once

#include "clay/gradcheck/check.hpp"
#include "clay/gradcheck/diff_op.hpp"
#include "clay/gradcheck/ops.hpp"
#include "clay/gradcheck/pipeline.hpp"
#include "clay/gradcheck/registry.hpp"
#include "clay/gradcheck/scenes.hpp"
