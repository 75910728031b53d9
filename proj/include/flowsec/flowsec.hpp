#pragma once

#include "flowsec/error.hpp"
#include "flowsec/index_set.hpp"
#include "flowsec/network.hpp"
#include "flowsec/flow_relation.hpp"
#include "flowsec/poset.hpp"
#include "flowsec/labeling.hpp"
#include "flowsec/security.hpp"
#include "flowsec/tuple_labels.hpp"
#include "flowsec/multiflow.hpp"
#include "flowsec/io.hpp"
#include "flowsec/dot.hpp"
