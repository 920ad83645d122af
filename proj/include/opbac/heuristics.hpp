#pragma once

#include <random>
#include <vector>

#include "opbac/instance.hpp"
#include "opbac/solution.hpp"

namespace opbac {

// Closed tour through the depot with cached length and score.
struct Tour {
  std::vector<int> seq;  // starts at the depot; closing edge implied
  int64_t length = 0;
  int64_t score = 0;
};

Tour make_tour(const Instance& inst, std::vector<int> seq);
bool tour_feasible(const Instance& inst, const Tour& t);

struct HeurParams {
  double greedy_xmin = 0.3;  // XHEUR_GREEDY_XMIN
  int pop_size = 10;         // XHEUR_EA4OP_POP_SIZE
  int d2d = 5;               // XHEUR_EA4OP_D2D
  int npar = 3;              // XHEUR_EA4OP_NPAR
  int generations = 25;      // evolution budget per call
};

// Path-building heuristic over the x* values (greedy matching into paths,
// random joins, then the repair pipeline).
Tour heur_pb(const Instance& inst, const LpSolution& sol, std::mt19937& rng,
             const HeurParams& params = {});

// Vertex-picking population: Bernoulli(y*) vertex selection, random cycles,
// repair, then a small evolutionary improvement loop. Sorted best-first.
std::vector<Tour> heur_vp_population(const Instance& inst,
                                     const LpSolution& sol, std::mt19937& rng,
                                     const HeurParams& params = {});

// 2-opt + Or-opt (segments of 1..3) to a local optimum; vertex set unchanged.
Tour improve_tour(const Instance& inst, const Tour& t);

// Greedily remove the vertex with the best length-saving/score-lost ratio
// until the budget is met. The depot always stays.
Tour drop_until_feasible(const Instance& inst, const Tour& t);

// Insert scoring vertices while they fit the budget; candidate pruning uses a
// k-d tree over coordinates (linear fallback for matrix instances).
Tour add_vertices(const Instance& inst, const Tour& t);

// improve -> drop -> add -> improve, the standard post-processing chain.
Tour repair_pipeline(const Instance& inst, Tour t);

}  // namespace opbac
