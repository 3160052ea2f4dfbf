// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "zigzag/code_c1.hpp"
#include "zigzag/code_c2.hpp"
#include "zigzag/decoder.hpp"
#include "zigzag/field.hpp"
#include "zigzag/hypercube.hpp"
#include "zigzag/matrix.hpp"
#include "zigzag/rebuild.hpp"
#include "zigzag/shard.hpp"
