#pragma once

#include "tetduffy/geometry.hpp"

// Shared sample geometry: the unit simplex plus a face-adjacent and an
// edge-adjacent neighbor, the standing trio for self/face/edge contact.
namespace sample {

inline tetduffy::Tetrahedron unit_tet() {
  return {{tetduffy::Vec3{0, 0, 0}, tetduffy::Vec3{1, 0, 0},
           tetduffy::Vec3{0, 1, 0}, tetduffy::Vec3{0, 0, 1}}};
}

// shares the face {(0,0,0),(1,0,0),(0,1,0)} with unit_tet
inline tetduffy::Tetrahedron face_neighbor_tet() {
  return {{tetduffy::Vec3{0, 0, 0}, tetduffy::Vec3{1, 0, 0},
           tetduffy::Vec3{0, 1, 0}, tetduffy::Vec3{0.3, 0.4, -1.03}}};
}

// shares the edge {(0,0,0),(0,0,1)} with unit_tet
inline tetduffy::Tetrahedron edge_neighbor_tet() {
  return {{tetduffy::Vec3{0, 0, 0}, tetduffy::Vec3{0, 0, 1},
           tetduffy::Vec3{-0.04, -1.09, -0.05},
           tetduffy::Vec3{0.3, -0.4, -1.09}}};
}

inline tetduffy::Vec3 apex() { return {0, 0, 1}; }  // 4th vertex of unit_tet

}  // namespace sample
