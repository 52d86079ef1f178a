#pragma once

// Bundled example models shared by the tests, the benchmarks and the
// command-line `gen` command.
//
//   * fig1_model  — two players who must coordinate identical moves to reach
//                   the goal state, then hold it with a joint loop.
//   * fig2_model  — a one-player wait/go chain where the goal proposition
//                   holds only at the middle state, so arriving there on
//                   round k requires counting rounds.
//   * fig3_family — a one-player blind chain of length k: every state past
//                   the start looks alike to the player, so reaching the goal
//                   needs k memory states even though the underlying graph is
//                   a straight line.

#include "stratmc/game_model.hpp"

namespace stratmc {

GameModel fig1_model();
GameModel fig2_model();

// Blind chain with k advancing steps; throws std::invalid_argument if k < 1.
GameModel fig3_family(int k);

}  // namespace stratmc
