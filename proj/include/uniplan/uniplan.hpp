#pragma once

#include "uniplan/error.hpp"
#include "uniplan/task.hpp"
#include "uniplan/metrics.hpp"
#include "uniplan/task_io.hpp"
#include "uniplan/compiler.hpp"
#include "uniplan/compiled_io.hpp"
#include "uniplan/search.hpp"
#include "uniplan/oracle.hpp"
#include "uniplan/domains.hpp"
#include "uniplan/bench.hpp"
