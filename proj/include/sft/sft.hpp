#pragma once

#include "sft/catalog.hpp"
#include "sft/census.hpp"
#include "sft/core.hpp"
#include "sft/criteria.hpp"
#include "sft/fingerprint.hpp"
#include "sft/pattern.hpp"
#include "sft/pattern_io.hpp"
#include "sft/perm_group.hpp"
#include "sft/permutation.hpp"
#include "sft/subgroups.hpp"
#include "sft/tree.hpp"
