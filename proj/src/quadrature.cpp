#include "qwlim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qwlim {

double Quadrature::total_weight() const {
    double acc = 0.0;
    for (double w : weights) acc += w;
    return acc;
}

Quadrature Quadrature::midpoint(const Potential1D& potential, int n_nodes) {
    if (n_nodes < 1) throw std::invalid_argument("quadrature needs at least one node");
    const auto bounds = potential.piece_boundaries();
    const std::size_t pieces = bounds.size() - 1;
    const double total = bounds.back() - bounds.front();

    // proportional allocation, at least one node per piece, exact total
    std::vector<int> alloc(pieces, 1);
    int assigned = static_cast<int>(pieces);
    if (assigned > n_nodes) n_nodes = assigned;
    std::vector<double> frac(pieces);
    for (std::size_t i = 0; i < pieces; ++i) {
        const double share =
            (bounds[i + 1] - bounds[i]) / total * static_cast<double>(n_nodes);
        const int extra = std::max(0, static_cast<int>(std::floor(share)) - 1);
        alloc[i] += extra;
        assigned += extra;
        frac[i] = share - std::floor(share);
    }
    std::vector<std::size_t> order(pieces);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (std::size_t k = 0; assigned < n_nodes; ++k)
        ++alloc[order[k % pieces]], ++assigned;

    Quadrature q;
    q.nodes.reserve(n_nodes);
    q.weights.reserve(n_nodes);
    for (std::size_t i = 0; i < pieces; ++i) {
        const double h = (bounds[i + 1] - bounds[i]) / alloc[i];
        for (int j = 0; j < alloc[i]; ++j) {
            q.nodes.push_back(bounds[i] + (j + 0.5) * h);
            q.weights.push_back(h);
        }
    }
    return q;
}

} // namespace qwlim
