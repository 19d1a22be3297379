#include "shopstab/elicitation.hpp"

#include <cmath>
#include <stdexcept>

namespace shopstab {

double i_from_horizon(const HorizonStatement& s) {
    if (!(s.pc > 0.0) || s.pc > 1.0)
        throw std::domain_error("pc must lie in (0, 1]");
    if (s.horizon < 1)
        throw std::domain_error("horizon length must be >= 1");
    return std::pow(s.pc, 1.0 / static_cast<double>(s.horizon));
}

double i_from_period(const PeriodStatement& s) {
    if (s.dec < 0.0 || s.dec >= 1.0)
        throw std::domain_error("dec must lie in [0, 1)");
    if (s.period < 1)
        throw std::domain_error("period length must be >= 1");
    return std::pow(1.0 - s.dec, 1.0 / static_cast<double>(s.period));
}

}  // namespace shopstab
