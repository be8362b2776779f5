#include <pvi/numeric.hpp>

#include <pvi/error.hpp>

#include <algorithm>
#include <numeric>

namespace pvi {

std::vector<std::vector<cplx>> fornberg_weights(cplx x0, std::span<const cplx> nodes, int max_order)
{
    const std::size_t n = nodes.size();
    if (n == 0 || max_order < 0)
        throw Error(ErrorKind::InvalidArgument, "need at least one node and a non-negative order");
    const auto m = static_cast<std::size_t>(max_order);
    std::vector<std::vector<cplx>> c(m + 1, std::vector<cplx>(n, 0.0));
    cplx c1 = 1.0;
    cplx c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min(i, m);
        cplx c2 = 1.0;
        const cplx c5 = c4;
        c4 = nodes[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const cplx c3 = nodes[i] - nodes[j];
            if (c3 == cplx(0.0))
                throw Error(ErrorKind::InvalidArgument, "finite-difference nodes must be distinct");
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k)
                    c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k)
                c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

std::vector<std::size_t> nearest_nodes(std::span<const cplx> nodes, cplx x0, std::size_t count)
{
    std::vector<std::size_t> idx(nodes.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    count = std::min(count, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(),
                      [&](std::size_t a, std::size_t b) { return std::abs(nodes[a] - x0) < std::abs(nodes[b] - x0); });
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    return idx;
}

cplx sampled_derivative(std::span<const cplx> nodes, std::span<const cplx> values, cplx x0, int order,
                        std::size_t stencil)
{
    if (nodes.size() != values.size())
        throw Error(ErrorKind::InvalidArgument, "node and value counts differ");
    if (nodes.size() < stencil || stencil < static_cast<std::size_t>(order) + 1)
        throw Error(ErrorKind::InsufficientSamples, "not enough samples for the requested stencil");
    const auto idx = nearest_nodes(nodes, x0, stencil);
    std::vector<cplx> xs, fs;
    for (auto i : idx) {
        xs.push_back(nodes[i]);
        fs.push_back(values[i]);
    }
    const auto w = fornberg_weights(x0, xs, order);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j)
        acc += w[static_cast<std::size_t>(order)][j] * fs[j];
    return acc;
}

Derivatives2 central_derivatives(const std::function<cplx(cplx)>& f, cplx x0, cplx h)
{
    const cplx f0 = f(x0);
    auto stencil = [&](cplx s, cplx& d1, cplx& d2) {
        const cplx p1 = f(x0 + s), m1 = f(x0 - s), p2 = f(x0 + 2.0 * s), m2 = f(x0 - 2.0 * s);
        d1 = (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * s);
        d2 = (16.0 * (p1 + m1) - (p2 + m2) - 30.0 * f0) / (12.0 * s * s);
    };
    cplx a1, a2, b1, b2;
    stencil(h, a1, a2);
    stencil(0.5 * h, b1, b2);
    return {f0, (16.0 * b1 - a1) / 15.0, (16.0 * b2 - a2) / 15.0};
}

} // namespace pvi
