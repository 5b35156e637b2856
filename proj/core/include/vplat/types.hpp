#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vplat {

enum class ProcessKind { Schrodinger, Dirac, KleinGordon, Photon };
enum class Scaling { Diffusive, Ballistic };
enum class NumericMode { Float, Integer };

// Species labels across all processes. Klein-Gordon stores its two time
// levels under A (field 0 = level t, field 1 = level t-1).
enum class Species { A, B, C, D, R, L };

// Plane-wave branch selector: energy sign for Dirac/Klein-Gordon,
// propagation direction for the photon.
enum class Branch { Positive, Negative, Right, Left };

struct SpecError : std::runtime_error {
  explicit SpecError(const std::string& msg) : std::runtime_error(msg) {}
};

inline std::string_view kind_name(ProcessKind k) {
  switch (k) {
    case ProcessKind::Schrodinger: return "schrodinger";
    case ProcessKind::Dirac: return "dirac";
    case ProcessKind::KleinGordon: return "kleingordon";
    case ProcessKind::Photon: return "photon";
  }
  return "?";
}

inline std::string_view species_name(Species s) {
  switch (s) {
    case Species::A: return "A";
    case Species::B: return "B";
    case Species::C: return "C";
    case Species::D: return "D";
    case Species::R: return "R";
    case Species::L: return "L";
  }
  return "?";
}

// Number of site arrays a state of this kind carries.
inline std::size_t field_count(ProcessKind k) {
  return k == ProcessKind::Dirac ? 4 : 2;
}

}  // namespace vplat
