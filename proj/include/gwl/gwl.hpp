#pragma once

// Convenience header pulling in the whole library.

#include "gwl/baseline_block.hpp"
#include "gwl/bench.hpp"
#include "gwl/codec.hpp"
#include "gwl/entropy.hpp"
#include "gwl/graph_mc.hpp"
#include "gwl/lifting.hpp"
#include "gwl/metrics.hpp"
#include "gwl/motion_map.hpp"
#include "gwl/plane.hpp"
#include "gwl/range_coder.hpp"
#include "gwl/sparse_sampling.hpp"
#include "gwl/subband_codec.hpp"
#include "gwl/volume_io.hpp"
