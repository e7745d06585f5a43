#ifndef FADINGMAC_FADINGMAC_HPP
#define FADINGMAC_FADINGMAC_HPP

#include "fadingmac/errors.hpp"
#include "fadingmac/csv.hpp"
#include "fadingmac/capacity_region.hpp"
#include "fadingmac/channel.hpp"
#include "fadingmac/utility.hpp"
#include "fadingmac/solver.hpp"
#include "fadingmac/policies.hpp"
#include "fadingmac/report.hpp"
#include "fadingmac/harness.hpp"
#include "fadingmac/verification.hpp"

#endif  // FADINGMAC_FADINGMAC_HPP
