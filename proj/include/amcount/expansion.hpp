#pragma once

#include "amcount/errors.hpp"

#include <string>

namespace amc {

/// Coefficients of the averaged step-counter expansion
///   int_0^u N(t)/t dt = (A/alpha) u^alpha + B log^2 u + C log u + D + o(1).
struct ExpansionCoefficients {
    double alpha = 1;
    double A = 1;
    double B = 0;
    double C = 0;
    double D = 0;

    void validate() const {
        if (!(alpha > 0)) throw ContractError("expansion coefficients need alpha > 0, got " + std::to_string(alpha));
        if (!(A > 0)) throw ContractError("expansion coefficients need A > 0, got " + std::to_string(A));
    }
};

}  // namespace amc
