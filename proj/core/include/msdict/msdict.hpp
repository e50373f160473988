#pragma once

#include "msdict/counter_dict.hpp"
#include "msdict/counting_filter.hpp"
#include "msdict/hashing.hpp"
#include "msdict/ms_dict.hpp"
#include "msdict/params.hpp"
#include "msdict/pocket_dict.hpp"
#include "msdict/snapshot.hpp"
#include "msdict/spare.hpp"
#include "msdict/sparse_dict.hpp"
