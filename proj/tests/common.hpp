#pragma once

#include <string>

#include "twistforge/curve_spec.hpp"
#include "twistforge/twist.hpp"

namespace tftest {

inline const twistforge::CurveSpec& fixture() {
  static const twistforge::CurveSpec spec =
      twistforge::load_curve_spec(std::string(TWISTFORGE_FIXTURE_DIR) + "/x7_y3z4_z7.tfs");
  return spec;
}

inline const twistforge::GammaGroup& gamma21() {
  static const twistforge::GammaGroup g = twistforge::build_gamma(fixture());
  return g;
}

inline const std::vector<twistforge::PairGH>& pairs21() {
  static const std::vector<twistforge::PairGH> p = [] {
    twistforge::Budget b;
    return twistforge::enumerate_pairs(gamma21(), b);
  }();
  return p;
}

inline twistforge::KummerSolutionFamily family(std::size_t row) {
  twistforge::Budget b;
  return twistforge::solve_kummer(twistforge::pose_problem(gamma21(), pairs21().at(row)),
                                  [](int q) { return fixture().param_name(q); }, b);
}

inline int aut_generator(const std::string& name) {
  const auto& names = gamma21().aut().generator_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return gamma21().aut().generators()[i];
  }
  return -1;
}

}  // namespace tftest
