#include "intervalize/interval_map.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "intervalize/errors.hpp"

namespace itv {

namespace {

constexpr char kMagic[8] = {'M', 'T', 'V', 'S', 'C', 'A', 'L', 'E'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "scale cache writer assumes a little-endian host");

template <typename T>
void write_pod(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
bool read_pod(std::istream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof value);
  return bool(in);
}

}  // namespace

double round8(double x) { return std::round(x * 1e8) / 1e8; }

Eigen::VectorXd column_means(const Eigen::MatrixXd& cells) {
  if (cells.size() == 0) throw ContractError("column_means: empty matrix");
  Eigen::VectorXd means = cells.colwise().mean();
  for (int j = 0; j < means.size(); ++j) means(j) = round8(means(j));
  return means;
}

ScaleCache::ScaleCache(std::filesystem::path directory)
    : dir_(std::move(directory)), persistent_(true) {
  std::filesystem::create_directories(dir_);
}

std::string ScaleCache::file_name(const MeasureSpec& spec, int n, int rb) {
  std::string name = measure_label(spec);
  name += "_n" + std::to_string(n);
  name += rb == kUnboundedRb ? "_rbinf" : "_rb" + std::to_string(rb);
  return name + ".scale";
}

void ScaleCache::write_file(const std::filesystem::path& path, const ValueScale& scale) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write scale cache file " + tmp.string());
    out.write(kMagic, sizeof kMagic);
    write_pod(out, kVersion);
    write_pod(out, static_cast<std::uint32_t>(scale.spec.kind));
    write_pod(out, static_cast<std::uint32_t>(scale.spec.log_base));
    write_pod(out, scale.spec.p);
    write_pod(out, static_cast<std::uint32_t>(scale.n));
    write_pod(out, static_cast<std::uint64_t>(scale.rb));
    write_pod(out, static_cast<std::uint64_t>(scale.values.size()));
    write_pod(out, scale.quantum);
    out.write(reinterpret_cast<const char*>(scale.values.data()),
              static_cast<std::streamsize>(scale.values.size() * sizeof(double)));
    if (!out) throw DomainError("short write on scale cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, path);  // atomic publish
}

std::optional<ValueScale> ScaleCache::read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) return std::nullopt;
  std::uint32_t version = 0, kind = 0, log_base = 0, n = 0;
  std::uint64_t rb = 0, count = 0;
  ValueScale scale;
  if (!read_pod(in, version) || version != kVersion) return std::nullopt;
  if (!read_pod(in, kind) || !read_pod(in, log_base) || !read_pod(in, scale.spec.p) || !read_pod(in, n) ||
      !read_pod(in, rb) || !read_pod(in, count) || !read_pod(in, scale.quantum))
    return std::nullopt;
  scale.spec.kind = static_cast<MeasureKind>(kind);
  scale.spec.log_base = static_cast<int>(log_base);
  scale.spec.cutoff_n = static_cast<int>(n);
  scale.n = static_cast<int>(n);
  scale.rb = static_cast<int>(rb);
  scale.values.resize(count);
  in.read(reinterpret_cast<char*>(scale.values.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) return std::nullopt;
  return scale;
}

const ValueScale& ScaleCache::get(const MeasureSpec& spec, int n, int rb,
                                  const EnumerationCaps& caps, bool require_multiplicities) {
  std::scoped_lock lock(mutex_);
  const std::string key = file_name(spec.with_cutoff(n), n, rb);
  auto it = memory_.find(key);
  if (it != memory_.end() &&
      (!require_multiplicities || it->second.has_multiplicities()))
    return it->second;

  if (persistent_ && !require_multiplicities) {
    if (auto scale = read_file(dir_ / key)) {
      return memory_.insert_or_assign(key, std::move(*scale)).first->second;
    }
  }
  // cache files carry no multiplicities, so tie strategies rebuild
  ValueScale scale = enumerate_scale(spec, n, rb, caps);
  if (persistent_) write_file(dir_ / key, scale);
  return memory_.insert_or_assign(key, std::move(scale)).first->second;
}

RankedMatrix ranked_scores(const ScoreMatrix& matrix, const QrelsTable& qrels,
                           ScaleCache& cache, const EnumerationCaps& caps,
                           TieStrategy strategy, Binarization binarization) {
  const int n = matrix.spec.cutoff_n;
  RankedMatrix ranked;
  ranked.topics = matrix.topics;
  ranked.systems = matrix.systems;
  ranked.spec = matrix.spec;
  ranked.cells.resize(matrix.cells.rows(), matrix.cells.cols());
  ranked.rb_used.assign(matrix.topics.size(), kUnboundedRb);

  const bool needs_mult = strategy != TieStrategy::Unq;
  for (int i = 0; i < matrix.n_topics(); ++i) {
    int rb = kUnboundedRb;
    if (matrix.spec.recall_based())
      rb = recall_base(qrels, matrix.topics[i], binarization).rb;
    ranked.rb_used[i] = rb;
    const ValueScale& scale = cache.get(matrix.spec, n, rb, caps, needs_mult);
    for (int j = 0; j < matrix.n_systems(); ++j) {
      try {
        ranked.cells(i, j) = strategy == TieStrategy::Unq
                                 ? rank_of(scale, matrix.cells(i, j))
                                 : rank_with_ties(scale, matrix.cells(i, j), strategy);
      } catch (const DomainError& e) {
        throw DomainError("topic " + matrix.topics[i] + ", system " + matrix.systems[j] +
                          ": " + e.what());
      }
    }
  }
  return ranked;
}

}  // namespace itv
