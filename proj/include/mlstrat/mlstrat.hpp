#pragma once

#include "mlstrat/arff.hpp"
#include "mlstrat/canonical.hpp"
#include "mlstrat/dataset.hpp"
#include "mlstrat/error.hpp"
#include "mlstrat/experiment.hpp"
#include "mlstrat/fold_io.hpp"
#include "mlstrat/folds.hpp"
#include "mlstrat/graph.hpp"
#include "mlstrat/ledger.hpp"
#include "mlstrat/metrics.hpp"
#include "mlstrat/network.hpp"
#include "mlstrat/random.hpp"
#include "mlstrat/ranks.hpp"
#include "mlstrat/stratify.hpp"
#include "mlstrat/synthetic.hpp"
