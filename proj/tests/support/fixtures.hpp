#pragma once

#include <string>
#include <vector>

#include "logicrank/scene.hpp"

namespace logicrank::testing {

/// "a blue sphere on top of a red cube"
inline constexpr const char* kSphereOnCubeRule =
    "kp :- shape(O1,sphere), color(O1,blue), shape(O2,cube), color(O2,red), "
    "position(O1,O2,above).";

/// "one red cube and one blue sphere right of it"
inline constexpr const char* kSphereRightOfRedCubeRule =
    "kp :- shape(A,cube), color(A,red), shape(B,sphere), color(B,blue), position(B,A,right).";

/// "one blue cube and one red sphere right of it"
inline constexpr const char* kSphereRightOfBlueCubeRule =
    "kp :- shape(A,cube), color(A,blue), shape(B,sphere), color(B,red), position(B,A,right).";

/// "two blue spheres and one red cube"
inline constexpr const char* kTwoBlueSpheresRule =
    "kp :- shape(A,sphere), color(A,blue), shape(B,sphere), color(B,blue), "
    "shape(C,cube), color(C,red).";

/// "at least two blue spheres and a red cube, the biggest sphere below a red cube"
inline constexpr const char* kSizedSpheresRule =
    "blue_sphere(S) :- shape(S,sphere), color(S,blue).\n"
    "red_cube(C) :- shape(C,cube), color(C,red).\n"
    "kp :- blue_sphere(A), size(A,large), blue_sphere(B), size(B,small), red_cube(C), "
    "position(A,C,below).";

/// Two objects with the attribute probabilities of the worked example;
/// obj1 sits well above obj2.
SceneRecord sphere_on_cube_scene();

DetectedObject make_object(std::string id, double cx, double cy, Distribution shape,
                           Distribution color, Distribution size = {}, Distribution klass = {});

}  // namespace logicrank::testing
