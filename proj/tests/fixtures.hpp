#pragma once

#include <string>

#include "lipext/ifs_system.hpp"
#include "lipext/transducer.hpp"

namespace fixtures {

using namespace lipext;

inline IfsSystem cantor() {
    return IfsSystem("cantor", {ConformalMap::similarity_1d(1.0 / 3, 0.0), ConformalMap::similarity_1d(1.0 / 3, 2.0 / 3)});
}

inline IfsSystem ninth4() {
    return IfsSystem("ninth4", {ConformalMap::similarity_1d(1.0 / 9, 0.0), ConformalMap::similarity_1d(1.0 / 9, 2.0 / 9),
                                ConformalMap::similarity_1d(1.0 / 9, 2.0 / 3), ConformalMap::similarity_1d(1.0 / 9, 8.0 / 9)});
}

inline IfsSystem dyadic() {
    SeparationSpec osc{SeparationMode::Open, OpenSetWitness{Ball{{0.5}, 0.5}, {0.5}, 0.5}};
    return IfsSystem("dyadic", {ConformalMap::similarity_1d(0.5, 0.0), ConformalMap::similarity_1d(0.5, 0.5)}, osc);
}

inline IfsSystem dyadic_declared_strong() {
    return IfsSystem("dyadic", {ConformalMap::similarity_1d(0.5, 0.0), ConformalMap::similarity_1d(0.5, 0.5)});
}

inline IfsSystem half_quarter() {
    return IfsSystem("half_quarter", {ConformalMap::similarity_1d(0.5, 0.0), ConformalMap::similarity_1d(0.25, 0.75)});
}

// x/(x+3) and (x+2)/(x+3): the attractor lies in [0,1] and the maps are not affine.
inline IfsSystem moebius_pair() {
    return IfsSystem("moebius_pair", {ConformalMap::moebius(1, 0, 1, 3), ConformalMap::moebius(1, 2, 1, 3)}, {},
                     Ball{{0.5}, 1.0});
}

// Three maps of ratio 1/5 in the plane, one of them rotated by a quarter turn.
inline IfsSystem planar3() {
    return IfsSystem("planar3", {ConformalMap::similarity(0.2, {1, 0, 0, 1}, {0.0, 0.0}),
                                 ConformalMap::similarity(0.2, {0, -1, 1, 0}, {0.8, 0.2}),
                                 ConformalMap::similarity(0.2, {1, 0, 0, 1}, {0.4, 0.7})});
}

inline IfsSystem fifth3() {
    return IfsSystem("fifth3", {ConformalMap::similarity_1d(0.2, 0.0), ConformalMap::similarity_1d(0.2, 0.4),
                                ConformalMap::similarity_1d(0.2, 0.8)});
}

inline const char* kIdentity2 = "s, 1 -> s, 1\ns, 2 -> s, 2\n";
inline const char* kPairGrouping = "initial s\ns, 1 -> p1,\ns, 2 -> p2,\np1, 1 -> s, 1\np1, 2 -> s, 2\n"
                                   "p2, 1 -> s, 3\np2, 2 -> s, 4\n";
inline const char* kGroupingInverse = "s, 1 -> s, 1, 1\ns, 2 -> s, 1, 2\ns, 3 -> s, 2, 1\ns, 4 -> s, 2, 2\n";

inline std::string scenario_dir() { return LIPEXT_SCENARIO_DIR; }

} // namespace fixtures
