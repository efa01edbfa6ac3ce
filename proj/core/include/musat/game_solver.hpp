// Parity and Buchi game solving with positional strategies.

#ifndef MUSAT_GAME_SOLVER_HPP
#define MUSAT_GAME_SOLVER_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "musat/emptiness_game.hpp"

namespace musat {

struct Solution {
  // winner[v]: false = player diamond, true = player box.
  std::vector<bool> winner_box;
  // Positional strategies, defined on nodes owned and won by the player.
  std::unordered_map<int, int> diamond_strategy;
  std::unordered_map<int, int> box_strategy;

  bool diamond_wins(int v) const { return !winner_box[static_cast<std::size_t>(v)]; }
};

// Zielonka's recursive algorithm (max-parity convention).  Nodes without
// successors are lost by their owner.
Solution solve_parity(const ParityGame& g);

// Classical attractor-based solver for games with priorities within {1,2}:
// player diamond wins iff she can force priority 2 infinitely often.
// Throws on priorities outside {1,2}.
Solution solve_buchi(const ParityGame& g);

// Picks solve_buchi when the game is Buchi-shaped, solve_parity otherwise.
Solution solve_game(const ParityGame& g);

// PGSolver-style plain text:
//   parity <max id>;
//   <id> <priority> <owner: 0 diamond, 1 box> <succ,succ,...> ["name"];
std::string parity_game_to_pgsolver(const ParityGame& g);
ParityGame parity_game_from_pgsolver(const std::string& text);

}  // namespace musat

#endif  // MUSAT_GAME_SOLVER_HPP
