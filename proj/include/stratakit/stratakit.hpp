#pragma once

// Everything except the JSON layer (json_io.hpp), which needs nlohmann/json.

#include "stratakit/arrangement.hpp"
#include "stratakit/category.hpp"
#include "stratakit/common.hpp"
#include "stratakit/css.hpp"
#include "stratakit/delta_complex.hpp"
#include "stratakit/export.hpp"
#include "stratakit/fixtures.hpp"
#include "stratakit/graph_conf.hpp"
#include "stratakit/homology.hpp"
#include "stratakit/isomorphism.hpp"
#include "stratakit/poset.hpp"
#include "stratakit/rational_lp.hpp"
