#pragma once

#include "lilhdoc/algorithms.hpp"
#include "lilhdoc/bounds.hpp"
#include "lilhdoc/core.hpp"
#include "lilhdoc/env.hpp"
#include "lilhdoc/harness.hpp"
#include "lilhdoc/ingest.hpp"
#include "lilhdoc/instance_io.hpp"
#include "lilhdoc/verify.hpp"
