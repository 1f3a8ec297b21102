// Timing probe for the exact OT solver on two-parameter-Pareto-sized
// grids. Not part of the test suite.
#include <chrono>
#include <cstdio>

#include "wellposed/models.hpp"
#include "wellposed/transport.hpp"

using namespace wellposed;

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 64;
    auto model = pareto_2param_model();
    auto prior = uniform_prior_2d({{1.0, 1.0}, {2.0, 2.0}});
    auto g1 = posterior_2d_grid(model, prior, 1.55, n, n);
    auto g2 = posterior_2d_grid(model, prior, 1.85, n, n);
    auto d1 = g1.to_discrete();
    auto d2 = g2.to_discrete();
    std::printf("atoms: %zu vs %zu\n", d1.size(), d2.size());
    auto t0 = std::chrono::steady_clock::now();
    auto res = ot_discrete(d1, d2, 2.0);
    auto t1 = std::chrono::steady_clock::now();
    std::printf("W2 = %.12f in %.2f s\n", res.cost,
                std::chrono::duration<double>(t1 - t0).count());
    return 0;
}
