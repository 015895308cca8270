#pragma once

#include "sunflower/egt.hpp"
#include "sunflower/element_set.hpp"
#include "sunflower/extension.hpp"
#include "sunflower/family.hpp"
#include "sunflower/io.hpp"
#include "sunflower/lift.hpp"
#include "sunflower/numeric.hpp"
#include "sunflower/pipeline.hpp"
#include "sunflower/psf.hpp"
#include "sunflower/random.hpp"
#include "sunflower/reconstruct.hpp"
#include "sunflower/split.hpp"
#include "sunflower/sunflowers.hpp"
