#pragma once

#include "ibaudit/auditor.hpp"
#include "ibaudit/corpus.hpp"
#include "ibaudit/errors.hpp"
#include "ibaudit/evaluator.hpp"
#include "ibaudit/miner.hpp"
#include "ibaudit/pattern.hpp"
#include "ibaudit/report.hpp"
#include "ibaudit/splitter.hpp"
#include "ibaudit/stats.hpp"
#include "ibaudit/text.hpp"
