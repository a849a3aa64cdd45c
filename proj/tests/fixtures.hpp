#pragma once

#include "isopoly/generators.hpp"

namespace fixture {

// Default ledger for a space at the given depth, built the same way as `isopoly params`.
inline isopoly::Setting setting(const std::string& space_text, int depth) {
  const auto space = isopoly::parse_space(space_text);
  const auto sel = isopoly::select_k0(space, 8);
  isopoly::Setting s{space, isopoly::build_ledger(space, sel.k0, sel.phi, {}, depth), {}};
  s.blocks = isopoly::build_blocks(s.ledger);
  return s;
}

inline const isopoly::Setting& c0_depth4() {
  static const isopoly::Setting s = setting("c0", 4);
  return s;
}

inline const isopoly::Setting& l2_depth4() {
  static const isopoly::Setting s = setting("lp:2", 4);
  return s;
}

}  // namespace fixture
