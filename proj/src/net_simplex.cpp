#include "wellposed/net_simplex.hpp"

namespace wellposed::detail {

double solve_transport(const std::vector<double>& supply,
                       const std::vector<double>& demand,
                       const std::function<double(int, int)>& cost,
                       std::vector<PlanEntry>* plan) {
    TransportSimplex<const std::function<double(int, int)>&> solver(supply, demand, cost);
    return solver.solve(plan);
}

} // namespace wellposed::detail
