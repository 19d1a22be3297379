#pragma once

#include "shopstab/model.hpp"

namespace shopstab {

// "Changes at the end of the horizon matter pc times as much as changes
// right now."
struct HorizonStatement {
    double pc = 1.0;   // relative impact at the end of the horizon, in (0, 1]
    Tick horizon = 1;  // length T of the planning horizon, >= 1
};

// "Impact drops by dec over one reference period" (a working week, say).
struct PeriodStatement {
    double dec = 0.0;  // relative decrease per period, in [0, 1)
    Tick period = 5;   // period length in ticks, >= 1
};

// Decay base I = pc^(1/T). Returns a value in (0, 1]; 1 exactly iff pc = 1.
// Throws std::domain_error outside the statement's domain.
double i_from_horizon(const HorizonStatement& s);

// Decay base I = (1 - dec)^(1/period). Same range and error behavior.
double i_from_period(const PeriodStatement& s);

}  // namespace shopstab
