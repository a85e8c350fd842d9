// Plans the reference instance and prints the schedule head and totals.
#include <cstdio>

#include "sweep/sweep.hpp"

int main() {
    const sweep::SearchParams p{100.0, 10.0, 1.0, 1.0};
    const sweep::CriticalVelocitySet v = sweep::critical_velocities(p);
    std::printf("v_one_cycle=%.8f v_c_taylor=%.8f v_bisection=%.8f\n", v.v_one_cycle, v.v_c_taylor, v.v_bisection);

    const sweep::SweepPlan plan = sweep::build_plan(p);
    std::printf("vs=%.8f N=%d\n", plan.vs, plan.n_iterations);
    for (size_t i = 0; i < plan.cycles.size() && i < 5; ++i) {
        const sweep::CycleRecord& c = plan.cycles[i];
        std::printf("  cycle %2d  R=%.6f  T=%.6f  T_in=%.6f\n", c.index, c.radius, c.t_sweep, c.t_in);
    }
    std::printf("T_in=%.6f T_circular=%.6f T_one=%.6f T_total=%.6f\n", plan.t_in_total, plan.t_circular_total,
                plan.end_game.t_one, plan.t_total);
    return 0;
}
