#include "ecnf2mip/mip_model.hpp"

#include <cmath>

namespace ecnf2mip {

double row_activity(const Row& r, const std::vector<double>& point) {
    double act = 0;
    for (const auto& [coeff, col] : r.terms) act += coeff * point[col];
    return act;
}

bool row_satisfied(const Row& r, const std::vector<double>& point, double tol) {
    double act = row_activity(r, point);
    switch (r.sense) {
        case RowSense::Leq: return act <= r.rhs + tol;
        case RowSense::Geq: return act >= r.rhs - tol;
        case RowSense::Eq: return std::abs(act - r.rhs) <= tol;
    }
    return false;
}

}  // namespace ecnf2mip
