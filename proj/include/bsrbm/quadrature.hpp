#pragma once

#include "bsrbm/types.hpp"

namespace bsrbm {

/// Gauss-Hermite rule rewritten for standard-normal expectations:
/// E_{z~N(0,1)}[f(z)] ~= sum_k weights(k) * f(nodes(k)).
///
/// Nodes and weights come from the Golub-Welsch eigendecomposition of the
/// Hermite Jacobi matrix, then carry the z = sqrt(2) t change of variable.
/// Weights sum to 1 and the grid is symmetrized so odd integrands cancel
/// exactly.
class GaussHermite {
public:
    explicit GaussHermite(int n);

    int size() const { return static_cast<int>(nodes_.size()); }
    const Vector& nodes() const { return nodes_; }
    const Vector& weights() const { return weights_; }

    template <class F>
    double expect(F&& f) const {
        double acc = 0.0;
        for (int k = 0; k < size(); ++k) acc += weights_[k] * f(nodes_[k]);
        return acc;
    }

private:
    Vector nodes_;
    Vector weights_;
};

}  // namespace bsrbm
