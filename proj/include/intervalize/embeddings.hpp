#pragma once

#include <cstdint>
#include <vector>

#include "intervalize/run_space.hpp"

namespace itv {

/// A run on a common scale, kept as a triple; the 0/1 sequence is only ever
/// materialized on demand (LCMs blow up quickly).
struct EmbeddedRun {
  std::int64_t relevant = 0;
  std::int64_t length = 1;
  std::int64_t rb = 1;
};

struct PrecisionEmbedding {
  std::int64_t common_length = 1;  // LCM of the run lengths
  std::vector<EmbeddedRun> runs;
};

struct RecallEmbedding {
  std::int64_t common_rb = 1;  // LCM of the recall bases
  std::vector<EmbeddedRun> runs;
};

struct F1Embedding {
  std::int64_t s = 1;            // LCM of the N_i + RB_i
  std::int64_t common_size = 1;  // floor(s/2); length and recall base of the embeddings
  std::vector<EmbeddedRun> runs;
};

/// Rescales each run to the common length N = lcm(lengths): k relevant of
/// length N_i becomes k*N/N_i relevant of length N.  Precision is preserved
/// exactly.  LCM overflow past 64 bits raises CapacityError.
PrecisionEmbedding embed_precision(const std::vector<RunTriple>& runs);

/// Rescales each run to recall base RB = lcm(recall bases): k relevant
/// against RB_i becomes k*RB/RB_i relevant, length = rb = RB.  Recall is
/// preserved exactly.
RecallEmbedding embed_recall(const std::vector<RunTriple>& runs);

/// With s = lcm(N_i + RB_i) and alpha_i = s/(N_i + RB_i), a run with x_i
/// relevant maps to alpha_i*x_i relevant at length and recall base
/// floor(s/2); the embedded F1 value is 2*relevant/s.
F1Embedding embed_f1(const std::vector<RunTriple>& runs);

/// Renders the explicit gain sequence (ones then zeros); lengths above 10^4
/// raise CapacityError.
std::vector<int> render_embedding(const EmbeddedRun& run);

}  // namespace itv
