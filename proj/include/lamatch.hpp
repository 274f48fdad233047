#pragma once

#include "lamatch/classification_tree.hpp"
#include "lamatch/cpm.hpp"
#include "lamatch/crmm.hpp"
#include "lamatch/error.hpp"
#include "lamatch/flow.hpp"
#include "lamatch/flow_network.hpp"
#include "lamatch/generator.hpp"
#include "lamatch/instance.hpp"
#include "lamatch/instance_io.hpp"
#include "lamatch/oracle.hpp"
#include "lamatch/sat_reduction.hpp"
#include "lamatch/validate.hpp"
