#ifndef PVI_NUMERIC_HPP
#define PVI_NUMERIC_HPP

// Finite-difference helpers shared by the verification code.

#include <pvi/types.hpp>

#include <functional>
#include <span>
#include <vector>

namespace pvi {

/// Weights w[k][j] such that f^{(k)}(x0) ~ sum_j w[k][j] f(nodes[j]) for
/// k = 0..max_order. Nodes may be arbitrary distinct complex points.
std::vector<std::vector<cplx>> fornberg_weights(cplx x0, std::span<const cplx> nodes, int max_order);

/// Indices of the `count` nodes nearest to x0, in ascending index order.
std::vector<std::size_t> nearest_nodes(std::span<const cplx> nodes, cplx x0, std::size_t count);

/// Derivative of the given order at x0 from samples, using the `stencil`
/// nearest nodes. Throws InsufficientSamples if fewer nodes exist.
cplx sampled_derivative(std::span<const cplx> nodes, std::span<const cplx> values, cplx x0, int order,
                        std::size_t stencil = 7);

struct Derivatives2 {
    cplx f, d1, d2;
};

/// First and second derivative of an analytic function along direction h by
/// 5-point central differences, with one Richardson step (h and h/2).
Derivatives2 central_derivatives(const std::function<cplx(cplx)>& f, cplx x0, cplx h);

} // namespace pvi

#endif
