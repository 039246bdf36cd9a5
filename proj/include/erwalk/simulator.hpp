#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "erwalk/moments.hpp"

namespace erwalk {

/// The only generator used by the simulator. std::mt19937_64 output is fixed
/// by the standard for a given seed; draws are mapped to [0, 1) by hand so the
/// stream layout does not depend on the standard library's distributions.
using Rng = std::mt19937_64;

/// 53-bit uniform in [0, 1).
inline double uniform01(Rng& rng) { return double(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in {0, ..., count - 1} from a single draw.
inline int uniform_index(Rng& rng, int count) {
  const int k = static_cast<int>(uniform01(rng) * count);
  return k < count ? k : count - 1;
}

/// Seed of replication r derived from a study's base seed.
inline std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t r) {
  return base_seed ^ (r * 0x9E3779B97F4A7C15ull);
}

/// One draw of the Erdos-Renyi graph: symmetric adjacency, empty diagonal.
class GraphSample {
 public:
  explicit GraphSample(int n);

  int n() const { return n_; }
  bool has_edge(int i, int j) const { return adj_(i, j) != 0; }
  void set_edge(int i, int j, bool present);
  int degree(int i) const { return degree_[i]; }
  /// Neighbours of i in increasing vertex order.
  std::vector<int> neighbors(int i) const;
  int edge_count() const;

 private:
  int n_;
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> adj_;
  std::vector<int> degree_;
};

/// Draws each of the n(n-1)/2 pairs (i < j, lexicographic) with one uniform.
GraphSample sample_graph(int n, double p, Rng& rng);

/// Walker positions X_{m,t}, zero-based vertex indices.
using WalkerPositions = std::vector<int>;

/// Moves every walker once on g, in walker index order, one draw each: a
/// walker with k neighbours stays w.p. 1/(k+1), else picks a uniform neighbour.
void step(WalkerPositions& positions, const GraphSample& g, Rng& rng);

enum class InitMode { uniform_random, all_at_first, explicit_positions };

struct SimConfig {
  ModelDims dims;
  double p = 0.5;
  int T = 1000;
  int burn_in = 1000;
  std::uint64_t seed = 0;
  InitMode init = InitMode::uniform_random;
  WalkerPositions positions;  ///< used when init == explicit_positions

  void validate() const;
};

using CountMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// T x n occupancy counts M_{i,t}; row t is the count vector at time t+1.
struct ObservationSeries {
  ModelDims dims;
  CountMatrix counts;
  std::optional<int> burn_in;  ///< known only when produced by simulate()

  int T() const { return static_cast<int>(counts.rows()); }
  /// Throws DomainError unless every entry is >= 0 and every row sums to M.
  void validate() const;
};

/// Stateful stepper over the resampled graph; exposes positions for
/// diagnostics that need more than the counts.
class Simulator {
 public:
  explicit Simulator(const SimConfig& cfg);

  void advance();
  const WalkerPositions& positions() const { return positions_; }
  Eigen::VectorXi counts() const;

 private:
  ModelDims dims_;
  double p_;
  Rng rng_;
  WalkerPositions positions_;
};

/// burn_in unrecorded steps from the initial placement, then T recorded
/// count vectors. Bit-identical for identical configs.
ObservationSeries simulate(const SimConfig& cfg);

}  // namespace erwalk
