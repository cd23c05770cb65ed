#pragma once

#include "ssg/model.hpp"

namespace fixtures {

// Max state 0 exits at 0.5 or detours into state 1, which creeps toward 0.6
// so slowly that the naive criterion stops while the exit still looks better.
inline ssg::SsgModel slow_detour_game() {
    ssg::ModelBuilder b(4);
    b.add_action(0, "exit", {{2, 0.5}, {3, 0.5}});
    b.add_action(0, "detour", {{1, 1.0}});
    b.add_action(1, "creep", {{1, 1.0 - 1e-5}, {0, 0.5e-5}, {2, 0.3e-5}, {3, 0.2e-5}});
    b.add_action(2, "g", {{2, 1.0}});
    b.add_action(3, "z", {{3, 1.0}});
    b.add_goal(2);
    return b.build();
}

}  // namespace fixtures
