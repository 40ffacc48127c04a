#include "intervalize/embeddings.hpp"

#include <numeric>

#include "intervalize/errors.hpp"

namespace itv {

namespace {

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  std::int64_t g = std::gcd(a, b);
  std::int64_t q = a / g;
  if (q != 0 && b > std::numeric_limits<std::int64_t>::max() / q)
    throw CapacityError("embedding LCM overflows 64 bits");
  return q * b;
}

void check_triples(const std::vector<RunTriple>& runs) {
  if (runs.empty()) throw ContractError("embedding requires at least one run");
  for (const auto& t : runs) {
    if (t.n < 1 || t.rb < 1) throw ContractError("run triple needs n >= 1 and rb >= 1");
    if (t.r < 0 || t.r > std::min(t.n, t.rb))
      throw ContractError("run triple violates r <= min(n, rb)");
  }
}

}  // namespace

PrecisionEmbedding embed_precision(const std::vector<RunTriple>& runs) {
  check_triples(runs);
  std::int64_t common = 1;
  for (const auto& t : runs) common = checked_lcm(common, t.n);
  PrecisionEmbedding out;
  out.common_length = common;
  for (const auto& t : runs)
    out.runs.push_back({t.r * (common / t.n), common, common});
  return out;
}

RecallEmbedding embed_recall(const std::vector<RunTriple>& runs) {
  check_triples(runs);
  std::int64_t common = 1;
  for (const auto& t : runs) common = checked_lcm(common, t.rb);
  RecallEmbedding out;
  out.common_rb = common;
  for (const auto& t : runs)
    out.runs.push_back({t.r * (common / t.rb), common, common});
  return out;
}

F1Embedding embed_f1(const std::vector<RunTriple>& runs) {
  check_triples(runs);
  std::int64_t s = 1;
  for (const auto& t : runs) s = checked_lcm(s, static_cast<std::int64_t>(t.n) + t.rb);
  F1Embedding out;
  out.s = s;
  out.common_size = s / 2;  // floor; alpha_i * x_i <= s/2 keeps counts admissible
  for (const auto& t : runs) {
    std::int64_t alpha = s / (static_cast<std::int64_t>(t.n) + t.rb);
    out.runs.push_back({alpha * t.r, out.common_size, out.common_size});
  }
  return out;
}

std::vector<int> render_embedding(const EmbeddedRun& run) {
  if (run.length > 10000)
    throw CapacityError("embedded run too long to materialize (length " +
                        std::to_string(run.length) + ")");
  std::vector<int> gains(static_cast<std::size_t>(run.length), 0);
  std::fill(gains.begin(), gains.begin() + static_cast<std::size_t>(run.relevant), 1);
  return gains;
}

}  // namespace itv
