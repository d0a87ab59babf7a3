#ifndef QWLIM_QUADRATURE_HPP
#define QWLIM_QUADRATURE_HPP

#include <vector>

#include "qwlim/potential.hpp"

namespace qwlim {

/// Composite midpoint nodes on the support of a potential. Nodes are
/// distributed piece by piece (largest-remainder split of N), so no node
/// lands on a breakpoint and the weights sum to the support length.
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
    int size() const { return static_cast<int>(nodes.size()); }
    double total_weight() const;

    static Quadrature midpoint(const Potential1D& potential, int n_nodes);
};

} // namespace qwlim

#endif
