#pragma once

#include <stdexcept>
#include <string>

namespace vlslab {

// Thrown when a numerical routine leaves its validated domain (non-reversible
// snapshot, eigensolver stall, vanishing denominator). CLI maps this to exit
// code 2; plain std::invalid_argument maps to exit code 1.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace vlslab
