#ifndef TSMT_TSMT_HPP
#define TSMT_TSMT_HPP

#include "tsmt/error.hpp"
#include "tsmt/root_finding.hpp"
#include "tsmt/special_functions.hpp"
#include "tsmt/distributions.hpp"
#include "tsmt/dataset.hpp"
#include "tsmt/csv.hpp"
#include "tsmt/procedures.hpp"
#include "tsmt/rng.hpp"
#include "tsmt/hc_calibration.hpp"
#include "tsmt/asymptotics.hpp"
#include "tsmt/simulation.hpp"
#include "tsmt/presets.hpp"
#include "tsmt/report.hpp"

#endif  // TSMT_TSMT_HPP
